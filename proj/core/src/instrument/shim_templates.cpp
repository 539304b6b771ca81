#include "fc/instrument/shim_templates.hpp"

#include <stdexcept>

#include "fc/util/fs.hpp"

namespace fc::instrument {

std::string_view shim_init_source() {
    return R"py(from fc_runtime.shim import (
    ABSENT,
    GUARD_MESSAGE,
    CheckerRecursionError,
    CheckerViolation,
    Operation,
    ShadowState,
    ShadowStateMap,
    assertEquals,
    assertNotNull,
    assertTrue,
    checker_scope,
    dispatch,
    violations,
)
)py";
}

std::string_view shim_core_source() {
    return R"py(import contextlib
import importlib
import os
import sys
import threading

from fc_runtime import config

GUARD_MESSAGE = "Checker is calling a state-changing method."


class _Absent:
    __slots__ = ()

    def __repr__(self):
        return "ABSENT"

    def __bool__(self):
        return False


ABSENT = _Absent()


class Operation:
    __slots__ = ("signature", "baseObject", "arguments", "returnValue")

    def __init__(self, signature, baseObject, arguments, returnValue):
        self.signature = signature
        self.baseObject = baseObject
        self.arguments = arguments
        self.returnValue = returnValue

    def __repr__(self):
        return "Operation(%r, %s, %r, %r)" % (
            self.signature, type(self.baseObject).__name__, self.arguments, self.returnValue)


class ShadowStateMap:
    # Keyed by object identity; entries keep their key alive so an id is
    # never reused while the entry exists.

    def __init__(self):
        self._entries = {}

    def get(self, obj, default=None):
        entry = self._entries.get(id(obj))
        return default if entry is None else entry[1]

    getOrDefault = get

    def __getitem__(self, obj):
        entry = self._entries.get(id(obj))
        if entry is None:
            raise KeyError(obj)
        return entry[1]

    def __setitem__(self, obj, value):
        self._entries[id(obj)] = (obj, value)

    put = __setitem__

    def setdefault(self, obj, default=None):
        entry = self._entries.get(id(obj))
        if entry is None:
            self._entries[id(obj)] = (obj, default)
            return default
        return entry[1]

    def __contains__(self, obj):
        return id(obj) in self._entries

    containsKey = __contains__

    def __delitem__(self, obj):
        del self._entries[id(obj)]

    def __len__(self):
        return len(self._entries)

    def keys(self):
        return [entry[0] for entry in self._entries.values()]

    def items(self):
        return [entry for entry in self._entries.values()]

    def clear(self):
        self._entries.clear()


class CheckerRecursionError(RuntimeError):
    pass


class CheckerViolation(Exception):
    # Deliberately not an AssertionError: test-framework failures and checker
    # violations must stay distinguishable in logs.
    pass


class _ShadowStateHolder:
    def __init__(self):
        self.state = ShadowStateMap()
        self.lock = threading.RLock()
        self._local = threading.local()

    @property
    def in_checker(self):
        return getattr(self._local, "in_checker", False)

    @in_checker.setter
    def in_checker(self, value):
        self._local.in_checker = value


ShadowState = _ShadowStateHolder()

_current = threading.local()
_checkers = {}
_load_lock = threading.Lock()
violations = []


@contextlib.contextmanager
def checker_scope(checker_id):
    previous = getattr(_current, "checker_id", None)
    _current.checker_id = checker_id
    try:
        yield
    finally:
        _current.checker_id = previous


def _fail(detail):
    raise CheckerViolation("[fc-checker %s] %s" % (getattr(_current, "checker_id", None) or "?", detail))


def assertTrue(condition, message=None):
    if not condition:
        _fail("assertTrue failed" + (": %s" % message if message else ""))


def assertEquals(expected, actual, message=None):
    if expected != actual:
        _fail("assertEquals failed: expected %r, actual %r%s" % (
            expected, actual, (": %s" % message) if message else ""))


def assertNotNull(value, message=None):
    if value is None or value is ABSENT:
        _fail("assertNotNull failed: got %r%s" % (value, (": %s" % message) if message else ""))


def _load(checker_id):
    checker = _checkers.get(checker_id)
    if checker is None:
        with _load_lock:
            checker = _checkers.get(checker_id)
            if checker is None:
                module = importlib.import_module("fc_runtime.checkers.checker_" + checker_id)
                checker = getattr(module, "FcChecker_" + checker_id)
                _checkers[checker_id] = checker
    return checker


def _record(message):
    violations.append(message)
    sys.stderr.write(message + "\n")
    sink = os.environ.get("FC_VIOLATIONS_OUT")
    if sink:
        with open(sink, "a", encoding="utf-8") as handle:
            handle.write(message.replace("\n", " ") + "\n")


def dispatch(signature, base, args, ret, checker_ids):
    if ShadowState.in_checker:
        raise CheckerRecursionError(GUARD_MESSAGE)
    op = Operation(signature, base, list(args), ret)
    with ShadowState.lock:
        for checker_id in checker_ids:
            checker = _load(checker_id)
            if config.ON_VIOLATION == "log":
                try:
                    checker.fc_run(op, ShadowState.state)
                except CheckerRecursionError:
                    raise
                except CheckerViolation as violation:
                    _record(str(violation))
                except Exception as error:
                    _record("[fc-checker %s] %s: %s" % (checker_id, type(error).__name__, error))
            else:
                checker.fc_run(op, ShadowState.state)
)py";
}

std::string shim_config_source(std::string_view on_violation) {
    if (on_violation != "raise" && on_violation != "log") {
        throw std::invalid_argument("on_violation must be 'raise' or 'log'");
    }
    return "ON_VIOLATION = \"" + std::string(on_violation) + "\"\n";
}

std::string_view coverage_probe_source() {
    return R"py(import atexit
import json
import os
import sys
import threading

_root = os.path.realpath(os.environ.get("FC_COVERAGE_ROOT", ""))
_out = os.environ.get("FC_COVERAGE_OUT")
_hits = {}
_inside = {}


def _interesting(filename):
    result = _inside.get(filename)
    if result is None:
        path = os.path.realpath(filename)
        result = path.startswith(_root + os.sep)
        _inside[filename] = result
    return result


def _local(frame, event, arg):
    if event == "line":
        _hits.setdefault(frame.f_code.co_filename, set()).add(frame.f_lineno)
    return _local


def _global(frame, event, arg):
    if event == "call" and _interesting(frame.f_code.co_filename):
        _hits.setdefault(frame.f_code.co_filename, set()).add(frame.f_lineno)
        return _local
    return None


def _dump():
    sys.settrace(None)
    data = {}
    for filename, lines in _hits.items():
        rel = os.path.relpath(os.path.realpath(filename), _root).replace(os.sep, "/")
        data[rel] = sorted(lines)
    with open(_out, "w") as handle:
        json.dump(data, handle, sort_keys=True)


if _out and _root:
    sys.settrace(_global)
    threading.settrace(_global)
    atexit.register(_dump)
)py";
}

void emit_shim(const std::filesystem::path& root, std::string_view on_violation) {
    const auto pkg = root / kRuntimePackage;
    util::write_file(pkg / "__init__.py", shim_init_source());
    util::write_file(pkg / "shim.py", shim_core_source());
    util::write_file(pkg / "config.py", shim_config_source(on_violation));
    util::write_file(pkg / "checkers" / "__init__.py", "");
}

}  // namespace fc::instrument
