from datanode import DataNode


class NoNodeError(KeyError):
    pass


class NodeExistsError(KeyError):
    pass


class DataTree:
    def __init__(self):
        self.nodes = {"/": DataNode()}
        self.node_count = 1
        self.watches_enabled = True

    @staticmethod
    def parentPath(path: str) -> str:
        index = path.rfind("/")
        if index <= 0:
            return "/"
        return path[:index]

    @staticmethod
    def childName(path: str) -> str:
        return path[path.rfind("/") + 1:]

    def createNode(self, path: str, data: bytes = b"", ephemeral_owner: int = 0) -> str:
        if path in self.nodes:
            raise NodeExistsError(path)
        parent = self.nodes.get(DataTree.parentPath(path))
        if parent is None:
            raise NoNodeError(path)
        node = DataNode(data)
        if ephemeral_owner != 0:
            node.setEphemeralOwner(ephemeral_owner)
        self.nodes[path] = node
        parent.addChild(DataTree.childName(path))
        self.node_count = self.node_count + 1
        return path

    def deleteNode(self, path: str) -> None:
        node = self.nodes.get(path)
        if node is None:
            raise NoNodeError(path)
        if node.childCount() > 0:
            raise ValueError("node has children: " + path)
        parent = self.nodes[DataTree.parentPath(path)]
        parent.removeChild(DataTree.childName(path))
        del self.nodes[path]
        self.node_count = self.node_count - 1

    def getNode(self, path: str) -> DataNode:
        return self.nodes.get(path)

    def setData(self, path: str, data: bytes) -> None:
        node = self.nodes.get(path)
        if node is None:
            raise NoNodeError(path)
        node.setData(data)

    def getData(self, path: str) -> bytes:
        node = self.nodes.get(path)
        if node is None:
            raise NoNodeError(path)
        return node.getData()

    def getChildren(self, path: str) -> list:
        node = self.nodes.get(path)
        if node is None:
            raise NoNodeError(path)
        return sorted(node.getChildren())

    def approximateDataSize(self) -> int:
        total = 0
        for path, node in self.nodes.items():
            total = total + len(path) + node.approximateDataSize()
        return total

    def ephemeralCount(self, owner: int) -> int:
        count = 0
        for node in self.nodes.values():
            if node.ephemeral_owner == owner and owner != 0:
                count += 1
        return count

    def killSession(self, owner: int) -> int:
        doomed = [p for p, n in self.nodes.items() if n.ephemeral_owner == owner]
        for path in sorted(doomed, reverse=True):
            self.deleteNode(path)
        return len(doomed)
