#include <atomic>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fc/config.hpp"
#include "fc/corpus/selector.hpp"
#include "fc/error.hpp"
#include "fc/instrument/diff.hpp"
#include "fc/instrument/instrumenter.hpp"
#include "fc/mutation/evaluate.hpp"
#include "fc/mutation/mutants.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/pipeline/refine.hpp"
#include "fc/report/ledger.hpp"
#include "fc/report/overhead.hpp"
#include "fc/report/report.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/subject/project.hpp"
#include "fc/util/fs.hpp"
#include "fc/validation/dynamic_validator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Session {
    fc::Config config;
    fc::subject::SubjectProject project;
    fc::runner::TestRunner runner;
    fs::path work;

    fs::path checkers_dir() const { return work / "checkers"; }
};

Session open_session(const fs::path& config_path, const std::string& work_opt) {
    auto config = fc::Config::load(config_path);
    auto project = fc::subject::scan_project(config.project_root, config.project);
    fc::runner::TestRunner runner(config.project);
    const fs::path work = work_opt.empty() ? project.root / ".flycatcher" : fs::absolute(work_opt);
    fs::create_directories(work);
    return Session{std::move(config), std::move(project), std::move(runner), work};
}

void write_json(const fs::path& path, const json& j) { fc::util::write_file(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) { return json::parse(fc::util::read_file(path)); }

// Candidate tests from a previous `analyze`, or a fresh filter run.
std::vector<fc::subject::TestCase> population(Session& s) {
    const auto funnel_path = s.work / "funnel.json";
    std::vector<std::string> ids;
    if (fs::exists(funnel_path)) {
        ids = read_json(funnel_path).at("candidates").get<std::vector<std::string>>();
    } else {
        s.runner.check_available();
        const auto result = fc::corpus::filter_candidate_tests(s.project, s.runner);
        for (const auto& t : result.candidates) {
            ids.push_back(t.id);
        }
    }
    std::vector<fc::subject::TestCase> pop;
    for (const auto& id : ids) {
        if (const auto* t = s.project.test(id)) {
            pop.push_back(*t);
        }
    }
    return pop;
}

std::vector<fc::pipeline::CheckerArtifact> load_selected(const Session& s, const std::vector<std::string>& ids) {
    if (ids.empty()) {
        return fc::pipeline::load_artifacts(s.checkers_dir());
    }
    std::vector<fc::pipeline::CheckerArtifact> out;
    for (const auto& id : ids) {
        const auto dir = s.checkers_dir() / id;
        if (!fs::exists(dir / "meta.json")) {
            throw fc::DomainError("unknown checker: " + id);
        }
        out.push_back(fc::pipeline::load_artifact(dir));
    }
    return out;
}

bool at_least(fc::pipeline::CheckerStatus status, fc::pipeline::CheckerStatus floor) {
    using S = fc::pipeline::CheckerStatus;
    if (status == S::Rejected) {
        return false;
    }
    return static_cast<int>(status) >= static_cast<int>(floor);
}

int cmd_analyze(Session& s) {
    s.runner.check_available();
    const auto result = fc::corpus::filter_candidate_tests(s.project, s.runner);
    std::vector<std::string> ids;
    for (const auto& t : result.candidates) {
        ids.push_back(t.id);
    }
    write_json(s.work / "funnel.json", {{"funnel", result.funnel.to_json()},
                                        {"candidates", ids},
                                        {"timed_out", result.timed_out},
                                        {"failing", result.failing},
                                        {"warnings", s.project.warnings}});
    const auto& f = result.funnel;
    std::cout << "all " << f.all << "\nwith_sut_calls " << f.with_sut_calls << "\nwith_assert " << f.with_assert
              << "\npassing " << f.passing << "\n";
    return 0;
}

struct GenOptions {
    std::vector<std::string> tests;
    std::string provider;
    std::string script;
    std::uint64_t seed = 0;
    int jobs = 1;
};

int cmd_gen(Session& s, const GenOptions& o) {
    auto provider_config = s.config.provider;
    if (!o.provider.empty()) {
        provider_config.kind = o.provider == "http" ? fc::llm::ProviderConfig::Kind::Http
                                                    : fc::llm::ProviderConfig::Kind::Scripted;
        if (o.provider != "http" && o.provider != "scripted") {
            throw fc::DomainError("unknown provider: " + o.provider);
        }
    }
    if (!o.script.empty()) {
        provider_config.script_path = fs::absolute(o.script);
    }
    const auto pop = population(s);
    std::vector<const fc::subject::TestCase*> targets;
    if (o.tests.empty()) {
        for (const auto& t : pop) {
            targets.push_back(&t);
        }
    } else {
        for (const auto& id : o.tests) {
            const auto it = std::find_if(pop.begin(), pop.end(), [&](const auto& t) { return t.id == id; });
            if (it == pop.end()) {
                throw fc::DomainError("not a candidate test: " + id);
            }
            targets.push_back(&*it);
        }
    }

    fc::pipeline::TargetOptions options;
    options.refine.max_attempts = s.config.budgets.max_attempts;
    options.refine.same_kind_cutoff = s.config.budgets.same_kind_cutoff;
    options.context_budget = s.config.budgets.context_tokens;
    options.validation_extra = s.config.budgets.validation_extra;
    options.seed = o.seed;

    auto ledger = fc::report::RunLedger::load(s.work);
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors;
    bool any_rejected = false;

    const auto worker = [&] {
        for (auto i = next++; i < targets.size(); i = next++) {
            const auto& target = *targets[i];
            try {
                auto provider = fc::llm::make_provider(provider_config, target.id, s.config.base_dir);
                const auto id = fc::pipeline::checker_id_for(target.id);
                auto check = fc::validation::make_dynamic_check(s.project, s.runner,
                                                                s.config.caps.validation_timeout_seconds,
                                                                s.work / "validation" / id);
                auto run = fc::pipeline::run_target(s.project, pop, target, *provider, options, check,
                                                    s.checkers_dir());
                std::error_code ec;
                fs::remove_all(s.work / "validation" / id, ec);
                std::lock_guard lock(mu);
                ledger.upsert({target.id, run.artifact.id, run.wall_time_s, run.usage.input, run.usage.output,
                               run.usage.calls, run.artifact.attempts,
                               std::string(fc::pipeline::status_name(run.artifact.status))});
                any_rejected |= run.artifact.status == fc::pipeline::CheckerStatus::Rejected;
                std::cout << run.artifact.id << " " << fc::pipeline::status_name(run.artifact.status)
                          << " attempts=" << run.artifact.attempts << " " << target.id << "\n";
            } catch (const fc::DomainError& e) {
                std::lock_guard lock(mu);
                any_rejected = true;
                std::cerr << target.id << ": " << e.what() << "\n";
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                errors.push_back(target.id + ": " + e.what());
            }
        }
    };
    const int jobs = std::max(1, o.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    ledger.save(s.work, s.config.pricing);
    for (const auto& e : errors) {
        std::cerr << e << "\n";
    }
    if (!errors.empty()) {
        return 2;
    }
    return any_rejected ? 1 : 0;
}

int cmd_validate(Session& s, const std::string& checker_id) {
    auto artifact = load_selected(s, {checker_id}).front();
    const auto dir = s.checkers_dir() / checker_id;
    if (!fs::exists(dir / "split.json")) {
        throw fc::DomainError("checker has no split.json: " + checker_id);
    }
    const auto split = fc::corpus::CorpusSplit::from_json(read_json(dir / "split.json"));
    if (artifact.status == fc::pipeline::CheckerStatus::Draft ||
        artifact.status == fc::pipeline::CheckerStatus::Rejected) {
        throw fc::DomainError("checker " + checker_id + " is " + std::string(fc::pipeline::status_name(artifact.status)));
    }
    // Re-validating an already validated checker never downgrades it.
    auto probe = artifact;
    probe.status = fc::pipeline::CheckerStatus::StaticallyValid;
    const auto result = fc::validation::dynamic_validate(probe, split, s.project, s.runner,
                                                         s.config.caps.validation_timeout_seconds,
                                                         s.work / "validation" / checker_id);
    if (result.feedback) {
        std::cout << "FAIL " << fc::pipeline::feedback_kind_name(result.feedback->kind) << "\n"
                  << result.feedback->message << "\n";
        return 1;
    }
    if (artifact.status == fc::pipeline::CheckerStatus::StaticallyValid) {
        artifact.advance(fc::pipeline::CheckerStatus::Validated);
        fc::pipeline::save_artifact(dir, artifact);
    }
    std::cout << "PASS " << checker_id << " (" << result.outcome.tests_run << " tests)\n";
    return 0;
}

int cmd_cross_validate(Session& s) {
    std::vector<fc::pipeline::CheckerArtifact> validated;
    for (auto& a : fc::pipeline::load_artifacts(s.checkers_dir())) {
        if (at_least(a.status, fc::pipeline::CheckerStatus::Validated)) {
            validated.push_back(std::move(a));
        }
    }
    std::vector<std::string> suite;
    for (const auto& t : population(s)) {
        suite.push_back(t.id);
    }
    const auto report = fc::validation::cross_validate(validated, s.project, s.runner, suite,
                                                       s.config.caps.validation_timeout_seconds,
                                                       s.work / "cross_validation");
    for (const auto& a : validated) {
        fc::pipeline::save_artifact(s.checkers_dir() / a.id, a);
    }
    write_json(s.work / "cross_validation.json", report.to_json());
    std::size_t ok = 0;
    for (const auto& [id, flag] : report.cross_validated) {
        std::cout << id << " " << (flag ? "cross_validated" : "failed") << "\n";
        ok += flag ? 1 : 0;
    }
    std::cout << ok << " of " << report.cross_validated.size() << " cross-validated\n";
    return 0;
}

int cmd_instrument(Session& s, const std::vector<std::string>& ids, const std::string& out) {
    auto checkers = load_selected(s, ids);
    std::erase_if(checkers, [](const auto& c) { return !at_least(c.status, fc::pipeline::CheckerStatus::StaticallyValid); });
    auto plan = fc::instrument::InstrumentationPlan::build(std::move(checkers), s.project, fs::absolute(out),
                                                           s.config.on_violation);
    const auto result = fc::instrument::instrument(s.project, plan);
    const auto diff = fc::instrument::uninstrument_diff(s.project.root, plan.output_root);
    for (const auto& [file, sigs] : result.wrapped) {
        for (const auto& sig : sigs) {
            std::cout << file << " " << sig << "\n";
        }
    }
    for (const auto& c : diff.corrupted) {
        std::cerr << "corrupted: " << c << "\n";
    }
    return diff.identical_modulo_wrappers() ? 0 : 2;
}

std::set<std::string> default_scope(const Session& s) {
    std::set<std::string> scope;
    for (const auto& a : fc::pipeline::load_artifacts(s.checkers_dir())) {
        if (const auto* t = s.project.test(a.target)) {
            for (const auto& type : t->declaring_types()) {
                scope.insert(type);
            }
        }
    }
    return scope;
}

int cmd_mutate(Session& s, const std::vector<std::string>& scope_opt) {
    std::set<std::string> scope(scope_opt.begin(), scope_opt.end());
    if (scope.empty()) {
        scope = default_scope(s);
    }
    if (scope.empty()) {
        throw fc::DomainError("empty mutation scope; pass --scope or generate checkers first");
    }
    for (const auto& type : scope) {
        if (!s.project.has_type(type)) {
            throw fc::DomainError("unknown type in scope: " + type);
        }
    }
    const auto mutants = fc::mutation::generate_mutants(s.project, scope);
    json arr = json::array();
    std::map<std::string, std::size_t> per_op;
    for (const auto& m : mutants) {
        arr.push_back(m.to_json());
        ++per_op[std::string(fc::mutation::operator_name(m.op))];
    }
    write_json(s.work / "mutants.json", {{"scope", scope}, {"mutants", arr}});
    for (const auto& [op, n] : per_op) {
        std::cout << op << " " << n << "\n";
    }
    std::cout << "total " << mutants.size() << "\n";
    return 0;
}

int cmd_evaluate(Session& s, const std::vector<std::string>& ids) {
    const auto path = s.work / "mutants.json";
    if (!fs::exists(path)) {
        throw fc::DomainError("no mutants.json; run `mutate` first");
    }
    std::vector<fc::mutation::MutantRecord> mutants;
    const auto doc = read_json(path);
    for (const auto& m : doc.at("mutants")) {
        mutants.push_back(fc::mutation::MutantRecord::from_json(m));
    }
    auto checkers = load_selected(s, ids);
    std::erase_if(checkers, [](const auto& c) { return !at_least(c.status, fc::pipeline::CheckerStatus::Validated); });
    std::set<std::string> targets;
    for (const auto& c : checkers) {
        targets.insert(c.target);
    }
    if (targets.empty()) {
        throw fc::DomainError("no validated checkers to evaluate against");
    }
    fc::mutation::EvaluateOptions options;
    options.workdir = s.work / "mutation";
    options.on_violation = "raise";
    const auto report = fc::mutation::evaluate_mutants(s.project, std::move(mutants),
                                                       {targets.begin(), targets.end()}, checkers, s.runner, options);
    json arr = json::array();
    for (const auto& m : report.mutants) {
        arr.push_back(m.to_json());
    }
    write_json(s.work / "mutants_evaluated.json", arr);
    write_json(s.work / "mutation_report.json", report.counts.to_json());
    std::cout << report.counts.to_json().dump(2) << "\n";
    return 0;
}

int cmd_overhead(Session& s, int repeat, bool noop) {
    std::vector<fc::pipeline::CheckerArtifact> checkers;
    for (auto& a : fc::pipeline::load_artifacts(s.checkers_dir())) {
        if (at_least(a.status, fc::pipeline::CheckerStatus::CrossValidated)) {
            checkers.push_back(std::move(a));
        }
    }
    if (checkers.empty()) {
        throw fc::DomainError("overhead needs cross-validated checkers; run `cross-validate` first");
    }
    if (noop) {
        for (auto& c : checkers) {
            auto n = fc::pipeline::noop_checker(c.instrumented_signatures());
            n.id = "c_noop_" + c.id.substr(2);
            n.target = c.target;
            c = std::move(n);
        }
    }
    auto record = fc::report::measure_overhead(s.project, checkers, s.runner, repeat, s.config.overhead_noise_bound,
                                               s.work / "overhead", s.config.on_violation);
    auto ledger = fc::report::RunLedger::load(s.work);
    ledger.set_overhead(record);
    ledger.save(s.work, s.config.pricing);
    write_json(s.work / "overhead.json", record.to_json());
    std::cout << "baseline_mean_s " << record.baseline_mean << "\nchecked_mean_s " << record.checked_mean
              << "\nrelative_overhead " << record.relative << "\nnoise_bound " << record.noise_bound << "\n"
              << fc::report::kOverheadCaveat << "\n";
    return 0;
}

int cmd_report(Session& s) {
    const auto report = fc::report::build_report(s.work, s.config.pricing);
    write_json(s.work / "report.json", report);
    const auto text = fc::report::render_text(report);
    fc::util::write_file(s.work / "report.txt", text);
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flycatcher: turn unit tests into runtime checkers"};
    app.require_subcommand(1);
    std::string config_path = "flycatcher.json";
    std::string work;
    app.add_option("--config", config_path, "Path to flycatcher.json");
    app.add_option("--work", work, "Work directory (default <project>/.flycatcher)");

    auto* analyze = app.add_subcommand("analyze", "Scan the project and filter candidate tests");
    GenOptions gen_opts;
    auto* gen = app.add_subcommand("gen", "Generate checkers for target tests");
    gen->add_option("--test", gen_opts.tests, "Target test id (repeatable; default all candidates)");
    gen->add_option("--provider", gen_opts.provider, "scripted or http")->check(CLI::IsMember({"scripted", "http"}));
    gen->add_option("--script", gen_opts.script, "Script file for the scripted provider");
    gen->add_option("--seed", gen_opts.seed, "Seed for context and validation sampling");
    gen->add_option("--jobs", gen_opts.jobs, "Targets processed in parallel")->check(CLI::PositiveNumber);
    std::string checker_id;
    auto* validate = app.add_subcommand("validate", "Re-run dynamic validation of one checker");
    validate->add_option("--checker", checker_id, "Checker id")->required();
    auto* cross = app.add_subcommand("cross-validate", "Run the full suite with all validated checkers");
    std::vector<std::string> instr_ids;
    std::string out_dir;
    auto* instr = app.add_subcommand("instrument", "Write an instrumented copy of the project");
    instr->add_option("--checkers", instr_ids, "Checker ids (default all)")->delimiter(',');
    instr->add_option("--out", out_dir, "Output directory")->required();
    std::vector<std::string> scope;
    auto* mutate = app.add_subcommand("mutate", "Generate mutants for the given types");
    mutate->add_option("--scope", scope, "Types as <module>.<Type> (default: types of the checkers' targets)")
        ->delimiter(',');
    std::vector<std::string> eval_ids;
    auto* evaluate = app.add_subcommand("evaluate-mutants", "Classify mutants with and without checkers");
    evaluate->add_option("--checkers", eval_ids, "Checker ids (default all validated)")->delimiter(',');
    int repeat = 5;
    bool noop = false;
    auto* overhead = app.add_subcommand("overhead", "Measure checker overhead on the target test files");
    overhead->add_option("--repeat", repeat, "Runs per configuration")->check(CLI::PositiveNumber);
    overhead->add_flag("--noop", noop, "Replace checkers with no-op checkers on the same methods");
    auto* report = app.add_subcommand("report", "Summarize the work directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        auto session = open_session(config_path, work);
        if (analyze->parsed()) return cmd_analyze(session);
        if (gen->parsed()) return cmd_gen(session, gen_opts);
        if (validate->parsed()) return cmd_validate(session, checker_id);
        if (cross->parsed()) return cmd_cross_validate(session);
        if (instr->parsed()) return cmd_instrument(session, instr_ids, out_dir);
        if (mutate->parsed()) return cmd_mutate(session, scope);
        if (evaluate->parsed()) return cmd_evaluate(session, eval_ids);
        if (overhead->parsed()) return cmd_overhead(session, repeat, noop);
        if (report->parsed()) return cmd_report(session);
    } catch (const fc::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "infrastructure error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
