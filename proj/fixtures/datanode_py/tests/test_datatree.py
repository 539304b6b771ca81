import pytest

from datatree import DataTree, NoNodeError, NodeExistsError


def test_create_nodes_under_root():
    tree = DataTree()
    tree.createNode("/a")
    tree.createNode("/b")
    tree.createNode("/c")
    assert tree.getChildren("/") == ["a", "b", "c"]
    assert tree.node_count == 4


def test_delete_node_detaches_from_parent():
    tree = DataTree()
    tree.createNode("/a")
    tree.createNode("/a/x")
    tree.createNode("/a/y")
    tree.deleteNode("/a/x")
    assert tree.getChildren("/a") == ["y"]
    with pytest.raises(ValueError):
        tree.deleteNode("/a")


def test_create_requires_parent_and_uniqueness():
    tree = DataTree()
    with pytest.raises(NoNodeError):
        tree.createNode("/missing/child")
    tree.createNode("/p")
    with pytest.raises(NodeExistsError):
        tree.createNode("/p")


def test_data_round_trip_and_size():
    tree = DataTree()
    tree.createNode("/cfg", b"abc")
    tree.setData("/cfg", b"abcdef")
    assert tree.getData("/cfg") == b"abcdef"
    assert tree.approximateDataSize() == len("/") + len("/cfg") + 6


def test_kill_session_removes_ephemerals():
    tree = DataTree()
    tree.createNode("/e1", b"", 7)
    tree.createNode("/e2", b"", 7)
    tree.createNode("/keep", b"", 0)
    assert tree.ephemeralCount(7) == 2
    assert tree.killSession(7) == 2
    assert tree.getChildren("/") == ["keep"]
