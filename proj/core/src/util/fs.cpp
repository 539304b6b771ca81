#include "fc/util/fs.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fc/error.hpp"
#include "fc/util/hash.hpp"

namespace fc::util {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InfraError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw InfraError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InfraError("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw InfraError("short write to " + path.string());
    }
}

void append_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw InfraError("cannot append to " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

const std::vector<std::string>& default_excluded_dirs() {
    static const std::vector<std::string> dirs{".git", "__pycache__", ".pytest_cache", ".mypy_cache", ".flycatcher"};
    return dirs;
}

namespace {

bool is_excluded(const fs::path& abs, const std::vector<fs::path>& excluded_paths) {
    for (const auto& ex : excluded_paths) {
        std::error_code ec;
        if (fs::equivalent(abs, ex, ec)) {
            return true;
        }
    }
    return false;
}

std::vector<fs::path> absolutize(const fs::path& root, const std::vector<fs::path>& paths) {
    std::vector<fs::path> out;
    out.reserve(paths.size());
    for (const auto& p : paths) {
        out.push_back(p.is_absolute() ? p : root / p);
    }
    return out;
}

}  // namespace

std::vector<fs::path> list_files(const fs::path& root, const std::vector<std::string>& excluded_dirs,
                                 const std::vector<fs::path>& excluded_paths) {
    if (!fs::is_directory(root)) {
        throw InfraError("not a directory: " + root.string());
    }
    const auto excluded = absolutize(root, excluded_paths);
    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied);
    for (; it != fs::recursive_directory_iterator(); ++it) {
        const auto& entry = *it;
        const auto name = entry.path().filename().string();
        if (entry.is_directory()) {
            if (std::find(excluded_dirs.begin(), excluded_dirs.end(), name) != excluded_dirs.end() ||
                is_excluded(entry.path(), excluded)) {
                it.disable_recursion_pending();
            }
            continue;
        }
        if (!entry.is_regular_file() || is_excluded(entry.path(), excluded)) {
            continue;
        }
        files.push_back(fs::relative(entry.path(), root));
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    return files;
}

void copy_tree(const fs::path& from, const fs::path& to, const std::vector<std::string>& excluded_dirs,
               const std::vector<fs::path>& excluded_paths) {
    std::error_code ec;
    fs::create_directories(to, ec);
    if (ec) {
        throw InfraError("cannot create " + to.string() + ": " + ec.message());
    }
    for (const auto& rel : list_files(from, excluded_dirs, excluded_paths)) {
        const auto dst = to / rel;
        fs::create_directories(dst.parent_path());
        fs::copy_file(from / rel, dst, fs::copy_options::overwrite_existing, ec);
        if (ec) {
            throw InfraError("cannot copy " + (from / rel).string() + ": " + ec.message());
        }
    }
}

std::string tree_hash(const fs::path& root, const std::vector<std::string>& excluded_dirs,
                      const std::vector<fs::path>& excluded_paths) {
    Sha256 hasher;
    for (const auto& rel : list_files(root, excluded_dirs, excluded_paths)) {
        const auto name = rel.generic_string();
        hasher.update(name);
        hasher.update(std::string_view("\0", 1));
        hasher.update(read_file(root / rel));
        hasher.update(std::string_view("\0", 1));
    }
    return hasher.hex_digest();
}

void reset_directory(const fs::path& dir) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir, ec);
    if (ec) {
        throw InfraError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

std::string generic_relative(const fs::path& path, const fs::path& base) {
    return fs::relative(path, base).generic_string();
}

}  // namespace fc::util
