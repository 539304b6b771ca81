#include "fc/pipeline/refine.hpp"

#include <chrono>
#include <stdexcept>

#include "fc/llm/prompts.hpp"
#include "fc/pipeline/generate.hpp"
#include "fc/pipeline/static_validator.hpp"
#include "fc/util/fs.hpp"

namespace fc::pipeline {

namespace {

int trailing_run(const std::vector<FeedbackKind>& history) {
    if (history.empty()) {
        return 0;
    }
    int run = 1;
    for (auto i = history.size() - 1; i > 0 && history[i - 1] == history.back(); --i) {
        ++run;
    }
    return run;
}

}  // namespace

CheckerArtifact refine_loop(const CheckerArtifact& seed, const subject::SubjectProject& project,
                            llm::Gateway& gateway, llm::Conversation& conversation, const std::string& first_prompt,
                            const corpus::CorpusSplit& split, const RefineOptions& options,
                            const DynamicCheck& dynamic_check, std::vector<std::string>* warnings) {
    if (options.max_attempts < 1 || options.same_kind_cutoff < 1) {
        throw std::invalid_argument("refine_loop needs max_attempts >= 1 and same_kind_cutoff >= 1");
    }
    std::vector<FeedbackKind> history;
    std::string last_feedback;
    std::string last_source;

    auto rejected = [&](int attempts, std::string provider_error) {
        CheckerArtifact a = seed;
        a.checker_source = last_source;
        a.attempts = attempts;
        a.failure_history = history;
        a.last_feedback = last_feedback;
        a.provider_error = std::move(provider_error);
        a.advance(CheckerStatus::Rejected);
        return a;
    };

    std::string reply;
    try {
        reply = gateway.send(conversation, first_prompt).content;
    } catch (const llm::ProviderError& e) {
        return rejected(0, e.what());
    }

    for (int attempts = 1;; ++attempts) {
        CheckerArtifact candidate = seed;
        candidate.attempts = attempts;
        auto parsed = candidate_from_reply(reply);
        if (warnings != nullptr) {
            warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
        }

        std::optional<Feedback> fb;
        if (!parsed.source) {
            fb = feedback::syntax_error(project.config.language);
        } else {
            candidate.checker_source = *parsed.source;
            last_source = *parsed.source;
            fb = static_validate(candidate, project);
            if (!fb) {
                fb = dynamic_check ? dynamic_check(candidate, split) : std::nullopt;
                if (!fb) {
                    if (candidate.status == CheckerStatus::StaticallyValid) {
                        candidate.advance(CheckerStatus::Validated);
                    }
                    candidate.failure_history = history;
                    candidate.last_feedback = last_feedback;
                    return candidate;
                }
            }
        }

        history.push_back(fb->kind);
        last_feedback = fb->message;
        if (trailing_run(history) >= options.same_kind_cutoff || attempts >= options.max_attempts) {
            auto a = rejected(attempts, "");
            // Keep the furthest status this candidate reached before rejection.
            if (candidate.status == CheckerStatus::StaticallyValid) {
                a.status_history = candidate.status_history;
                a.status_history.push_back(CheckerStatus::Rejected);
            }
            return a;
        }
        try {
            reply = gateway.send(conversation, llm::render_refinement_prompt(stage_for(fb->kind), fb->message)).content;
        } catch (const llm::ProviderError& e) {
            return rejected(attempts, e.what());
        }
    }
}

TargetRun run_target(const subject::SubjectProject& project, const std::vector<subject::TestCase>& population,
                     const subject::TestCase& target, llm::Provider& provider, const TargetOptions& options,
                     const DynamicCheck& dynamic_check, const std::filesystem::path& checkers_root) {
    const auto start = std::chrono::steady_clock::now();
    TargetRun run;
    const auto id = checker_id_for(target.id);
    const auto dir = checkers_root / id;
    util::reset_directory(dir);
    const auto transcript = dir / "transcript.jsonl";

    llm::Gateway gateway(provider);
    CheckerArtifact seed;
    seed.id = id;
    seed.target = target.id;
    seed.imports = target.imports;
    seed.transcript_ref = "transcript.jsonl";

    run.split = corpus::make_split(population, target, options.context_budget, options.validation_extra, options.seed);
    util::write_file(dir / "split.json", run.split.to_json().dump(2) + "\n");

    try {
        llm::Conversation identify_conv("identify", transcript);
        run.annotated = identify_state_changing(project, target, gateway, identify_conv);
        run.warnings.insert(run.warnings.end(), run.annotated->warnings.begin(), run.annotated->warnings.end());
        seed.state_changing = run.annotated->state_changing;
    } catch (const IdentificationError& e) {
        seed.provider_error = e.what();
    } catch (const llm::ProviderError& e) {
        seed.provider_error = e.what();
    }

    if (!run.annotated || run.annotated->state_changing.empty()) {
        run.artifact = seed;
        if (run.annotated) {
            run.artifact.last_feedback = "no state-changing methods identified";
        }
        run.artifact.advance(CheckerStatus::Rejected);
    } else {
        std::vector<subject::TestCase> context;
        for (const auto& cid : run.split.context) {
            for (const auto& t : population) {
                if (t.id == cid) {
                    context.push_back(t);
                }
            }
        }
        llm::Conversation generate_conv("generate", transcript);
        const auto prompt = llm::render_generation_prompt(run.annotated->annotated_body, target.imports, context);
        run.artifact = refine_loop(seed, project, gateway, generate_conv, prompt, run.split, options.refine,
                                   dynamic_check, &run.warnings);
    }
    save_artifact(dir, run.artifact);
    run.usage = gateway.usage();
    run.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace fc::pipeline
