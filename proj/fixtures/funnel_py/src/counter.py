import time


class Counter:
    def __init__(self, start: int = 0):
        self.value = start

    def increment(self) -> int:
        self.value = self.value + 1
        return self.value

    def reset(self) -> None:
        self.value = 0

    def slow_read(self, seconds: float) -> int:
        time.sleep(seconds)
        return self.value
