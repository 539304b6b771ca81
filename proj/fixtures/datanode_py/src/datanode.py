"""A node of an in-memory hierarchical namespace.

Names follow the coordination-service original this fixture imitates
(addChild, getChildren, ...), which keeps operation signatures readable.
"""

from stat_info import StatPersisted

EMPTY_SET = frozenset()


class DataNode:
    # Class-level default; __init__ also assigns it explicitly.
    acl_index = 0

    def __init__(self, data: bytes = b"", acl: int = 0, stat: StatPersisted = None):
        self.data = data
        self.acl_index = 0
        if acl > 0:
            self.acl_index = acl
        self.stat = stat if stat is not None else StatPersisted()
        self.children = None
        self.ephemeral_owner = 0

    def addChild(self, child: str) -> bool:
        if self.children is None:
            # Capacity is only a sizing hint for the backing container.
            self.children = self._make_children(8)
        if child in self.children:
            return False
        self.children.add(child)
        self.stat.cversion = self.stat.cversion + 1
        return True

    def removeChild(self, child: str) -> bool:
        if self.children is None:
            return False
        if child not in self.children:
            return False
        self.children.remove(child)
        self.stat.cversion = self.stat.cversion + 1
        return True

    def setChildren(self, children: set) -> None:
        self.children = set(children) if children else None

    def getChildren(self) -> set:
        if self.children is None:
            return EMPTY_SET
        return set(self.children)

    def childCount(self) -> int:
        if self.children is None:
            return 0
        return len(self.children)

    def setData(self, data: bytes) -> None:
        self.data = data
        self.stat.version = self.stat.version + 1

    def getData(self) -> bytes:
        return self.data

    def approximateDataSize(self) -> int:
        if self.data is None:
            return 0
        return len(self.data)

    def isEphemeral(self) -> bool:
        return self.ephemeral_owner != 0

    def setEphemeralOwner(self, owner: int) -> None:
        if owner < 0:
            raise ValueError("owner must be non-negative")
        self.ephemeral_owner = owner

    def hasChild(self, child: str) -> bool:
        if self.children is None:
            return False
        return child in self.children

    def _make_children(self, capacity: int) -> set:
        return set()
