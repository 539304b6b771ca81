class StatPersisted:
    def __init__(self):
        self.version = 0
        self.cversion = 0
        self.aversion = 0
        self.mzxid = 0

    def digest(self) -> int:
        h = 17
        h = h * 31 + self.version
        h = h * 31 + self.cversion
        h = h * 31 + self.aversion
        return h % 1000003

    def isNewerThan(self, other: "StatPersisted") -> bool:
        if self.mzxid > other.mzxid:
            return True
        if self.mzxid == other.mzxid and self.version > other.version:
            return True
        return False
