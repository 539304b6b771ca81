from stat_info import StatPersisted


def test_digest_changes_with_version():
    a = StatPersisted()
    b = StatPersisted()
    assert a.digest() == b.digest()
    b.version = 1
    assert a.digest() != b.digest()


def test_newer_than_orders_by_zxid_then_version():
    a = StatPersisted()
    b = StatPersisted()
    b.mzxid = 5
    assert b.isNewerThan(a)
    a.mzxid = 5
    a.version = 1
    assert a.isNewerThan(b)
    assert not b.isNewerThan(a)
