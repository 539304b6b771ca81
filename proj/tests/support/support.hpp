#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "fc/config.hpp"
#include "fc/subject/project.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/process.hpp"

namespace fc::testing {

namespace fs = std::filesystem;

inline fs::path fixture_dir(const std::string& name) { return fs::path(FC_FIXTURES_DIR) / name; }
inline fs::path golden_dir() { return fs::path(FC_GOLDEN_DIR); }

// Removed on destruction unless FC_KEEP_TMP is set.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "fc") {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        if (std::getenv("FC_KEEP_TMP") == nullptr) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

inline void write_files(const fs::path& root, const std::map<std::string, std::string>& files) {
    for (const auto& [rel, content] : files) {
        util::write_file(root / rel, content);
    }
}

// Copy of a bundled fixture, so tests can mutate it freely.
inline fs::path copy_fixture(const std::string& name, const fs::path& into) {
    const auto dst = into / name;
    util::copy_tree(fixture_dir(name), dst);
    return dst;
}

inline Config fixture_config(const fs::path& project_root) {
    return Config::load(project_root / "flycatcher.json");
}

inline subject::SubjectProject scan_fixture(const fs::path& project_root) {
    const auto config = fixture_config(project_root);
    return subject::scan_project(config.project_root, config.project);
}

inline bool pytest_available() {
    static const bool ok = [] {
        const auto r = util::run_shell("python3 -c 'import pytest'", {});
        return r.exit_code == 0;
    }();
    return ok;
}

inline const std::string kEmptyChildrenTest =
    "tests/test_datanode.py::test_get_children_should_return_empty_set_when_there_are_no_children";

}  // namespace fc::testing
