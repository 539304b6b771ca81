#include "fc/llm/prompts.hpp"

#include <stdexcept>

#include "fc/util/text.hpp"

namespace fc::llm {

std::string_view stage_word(Stage stage) {
    switch (stage) {
        case Stage::Compile:
            return "compile";
        case Stage::Instrument:
            return "instrument";
        case Stage::Execute:
            return "execute";
    }
    return "compile";
}

const std::vector<std::string>& generation_guidelines() {
    static const std::vector<std::string> g{
        "The checker is a static and parameterized method.",
        "The checker receives (i) an Operation object, which contains the following attributes: signature, "
        "baseObject, arguments, and returnValue; and (ii) a shadow state mapping objects to their properties and "
        "respective values.",
        "The checker handles methods that modify the state of object instances. These methods are marked with a "
        "# state-changing comment in the target test. For these methods, the checker updates the provided shadow "
        "state.",
        "When reading a property from the shadow state, the checker falls back to a default value, as the property "
        "may not be in the shadow state yet.",
        "The checker updates the values in the shadow state based on the semantics of the received Operation "
        "object.",
        "Toward the end of the checker code, the checker asserts that properties have their expected values. "
        "Similar to the assertions in the test case, the assertions may use methods that do not modify the system "
        "state. Assert statements should be outside of if-statements, as in the test. Do not insert any return "
        "statements.",
        "To obtain the expected value in the assertion, the checker retrieves it from the shadow state.",
        "The checker does not modify the state of the baseObject from the received Operation.",
        "The checker only contains necessary variables and operations, and properly accesses methods and "
        "attributes according to their visibility.",
        "The checker code is explained with comments.",
    };
    return g;
}

const std::vector<FewShotExample>& few_shot_examples() {
    static const std::vector<FewShotExample> examples{
        {"BankAccount",
         R"py(def test_deposit_then_withdraw_updates_balance():
    account = BankAccount(100)  # state-changing
    account.deposit(50)  # state-changing
    assert account.withdraw(30)  # state-changing
    assert account.getBalance() == 120
)py",
         R"py(def bankAccountChecker(op, shadowState):
    baseObject = op.baseObject
    # Tracked properties of this account; new accounts start empty
    objectState = shadowState.get(baseObject, {})
    balance = objectState.get("balance", 0)
    # The constructor sets the opening balance
    if op.signature == "bank.BankAccount.BankAccount(int)":
        balance = op.arguments[0]
    # A deposit adds the amount
    elif op.signature == "bank.BankAccount.deposit(int)":
        balance = balance + op.arguments[0]
    # A successful withdrawal subtracts the amount
    elif op.signature == "bank.BankAccount.withdraw(int)":
        if op.returnValue:
            balance = balance - op.arguments[0]
    objectState["balance"] = balance
    shadowState[baseObject] = objectState
    # getBalance does not modify the state of baseObject
    assertEquals(objectState["balance"], baseObject.getBalance())
)py"},
        {"ListManager",
         R"py(def test_add_and_remove_items():
    manager = ListManager()  # state-changing
    manager.add("a")  # state-changing
    manager.add("b")  # state-changing
    manager.remove("a")  # state-changing
    assert manager.size() == 1
    assert manager.contains("b")
)py",
         R"py(def listManagerChecker(op, shadowState):
    baseObject = op.baseObject
    objectState = shadowState.get(baseObject, {})
    # Items in insertion order; absent until the first operation
    items = objectState.get("items", [])
    if op.signature == "lists.ListManager.add(str)":
        items.append(op.arguments[0])
    elif op.signature == "lists.ListManager.remove(str)":
        # remove drops the first occurrence only
        if op.arguments[0] in items:
            items.remove(op.arguments[0])
    objectState["items"] = items
    shadowState[baseObject] = objectState
    # size and contains are read-only
    assertEquals(len(objectState["items"]), baseObject.size())
    for item in objectState["items"]:
        assertTrue(baseObject.contains(item))
)py"},
        {"Rectangle",
         R"py(def test_resize_changes_area():
    rect = Rectangle(2, 3)  # state-changing
    assert rect.area() == 6
    rect.resize(4, 5)  # state-changing
    assert rect.area() == 20
)py",
         R"py(def rectangleChecker(op, shadowState):
    baseObject = op.baseObject
    objectState = shadowState.get(baseObject, {})
    width = objectState.get("width", 0)
    height = objectState.get("height", 0)
    # Both the constructor and resize set the two dimensions
    if op.signature == "shapes.Rectangle.Rectangle(int,int)" or op.signature == "shapes.Rectangle.resize(int,int)":
        width = op.arguments[0]
        height = op.arguments[1]
    objectState["width"] = width
    objectState["height"] = height
    shadowState[baseObject] = objectState
    # area is derived from the tracked dimensions
    assertEquals(objectState["width"] * objectState["height"], baseObject.area())
)py"},
        {"Counter",
         R"py(def test_increment_and_reset():
    counter = Counter()  # state-changing
    counter.increment()  # state-changing
    counter.increment()  # state-changing
    assert counter.value() == 2
    counter.reset()  # state-changing
    assert counter.value() == 0
)py",
         R"py(def counterChecker(op, shadowState):
    baseObject = op.baseObject
    objectState = shadowState.get(baseObject, {})
    # A fresh counter is zero
    count = objectState.get("count", 0)
    if op.signature == "counters.Counter.increment()":
        count = count + 1
    elif op.signature == "counters.Counter.reset()":
        count = 0
    objectState["count"] = count
    shadowState[baseObject] = objectState
    assertEquals(objectState["count"], baseObject.value())
)py"},
        {"KeyValueStore",
         R"py(def test_put_overwrite_delete():
    store = KeyValueStore()  # state-changing
    store.put("k", 1)  # state-changing
    store.put("k", 2)  # state-changing
    assert store.get("k") == 2
    store.delete("k")  # state-changing
    assert store.get("k") is None
    assert store.size() == 0
)py",
         R"py(def keyValueStoreChecker(op, shadowState):
    baseObject = op.baseObject
    objectState = shadowState.get(baseObject, {})
    # Copy of the mapping the store should hold
    entries = objectState.get("entries", {})
    if op.signature == "kv.KeyValueStore.put(str,object)":
        entries[op.arguments[0]] = op.arguments[1]
    elif op.signature == "kv.KeyValueStore.delete(str)":
        entries.pop(op.arguments[0], None)
    objectState["entries"] = entries
    shadowState[baseObject] = objectState
    # get and size are read-only
    assertEquals(len(objectState["entries"]), baseObject.size())
    for key in objectState["entries"]:
        assertEquals(objectState["entries"][key], baseObject.get(key))
)py"},
    };
    return examples;
}

std::string render_identification_prompt(const subject::TestCase& test,
                                         const std::vector<const subject::MethodInfo*>& impls) {
    std::string implementations;
    for (const auto* m : impls) {
        if (!implementations.empty()) {
            implementations += "\n\n";
        }
        implementations += m->body;
    }
    std::string out =
        "Many methods called in a test may modify the state of the target system, e.g., write and delete. "
        "Given a test case and the implementation of the methods called in the test, identify all method calls "
        "that can cause side effects in the target system and produce a new version of the test containing the ";
    out += kStateChangingMarker;
    out +=
        " comment in each line with method calls that can cause side effects. Constructors are state-changing "
        "methods by default.\n\nMethod implementations: ";
    out += implementations;
    out += "\n\nTest: ";
    out += test.body;
    if (out.back() != '\n') {
        out += '\n';
    }
    return out;
}

std::string render_generation_prompt(std::string_view annotated_test, const std::vector<std::string>& imports,
                                     const std::vector<subject::TestCase>& context) {
    std::string out =
        "Generalize the target test below into a runtime checker written in Python. The checker is invoked after "
        "every call to a state-changing method of the system and must follow these guidelines:\n\n";
    const auto& g = generation_guidelines();
    for (std::size_t i = 0; i < g.size(); ++i) {
        out += std::to_string(i + 1) + ". " + g[i] + "\n";
    }
    out +=
        "\nThe checker is a single top-level function taking (op, shadowState). Compare op.signature against "
        "fully qualified signatures of the form <module>.<Type>.<method>(<parameter types>); constructors use the "
        "type name as the method name. The assertion helpers assertTrue(condition), assertEquals(expected, "
        "actual) and assertNotNull(value) are available. Reply with the checker in one ```python code block.\n";

    const auto& examples = few_shot_examples();
    for (std::size_t i = 0; i < examples.size(); ++i) {
        out += "\nExample " + std::to_string(i + 1) + " (" + examples[i].name + ")\nTest:\n```python\n" +
               examples[i].test + "```\nChecker:\n```python\n" + examples[i].checker + "```\n";
    }

    out += "\nTarget test:\n```python\n";
    out += annotated_test;
    if (!annotated_test.empty() && annotated_test.back() != '\n') {
        out += '\n';
    }
    out += "```\n\nImports of the test file:\n```python\n";
    for (const auto& imp : imports) {
        out += imp + "\n";
    }
    out += "```\n";
    if (!context.empty()) {
        out += "\nOther tests exercising the same classes:\n";
        for (const auto& t : context) {
            out += "```python\n" + t.body;
            if (!t.body.empty() && t.body.back() != '\n') {
                out += '\n';
            }
            out += "```\n";
        }
    }
    return out;
}

std::string render_refinement_prompt(Stage stage, std::string_view error) {
    if (error.empty()) {
        throw std::invalid_argument("refinement prompt needs a nonempty error");
    }
    std::string out = "When trying to ";
    out += stage_word(stage);
    out += " the provided checker, the following error happens:\n\n";
    out += error;
    out += "\n\nPlease, provide a fixed version of the provided checker to fix the error.";
    return out;
}

}  // namespace fc::llm
