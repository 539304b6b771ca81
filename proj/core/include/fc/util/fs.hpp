#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fc::util {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);
void append_file(const fs::path& path, std::string_view content);

// Directory names skipped by tree walks, copies and hashes.
const std::vector<std::string>& default_excluded_dirs();

// Regular files under `root`, relative to it, sorted lexicographically.
// Directories whose name is in `excluded_dirs` and any path in `excluded_paths`
// (absolute or relative to root) are skipped.
std::vector<fs::path> list_files(const fs::path& root,
                                 const std::vector<std::string>& excluded_dirs = default_excluded_dirs(),
                                 const std::vector<fs::path>& excluded_paths = {});

void copy_tree(const fs::path& from, const fs::path& to,
               const std::vector<std::string>& excluded_dirs = default_excluded_dirs(),
               const std::vector<fs::path>& excluded_paths = {});

// SHA-256 over (relative path, content) pairs of list_files(root).
std::string tree_hash(const fs::path& root,
                      const std::vector<std::string>& excluded_dirs = default_excluded_dirs(),
                      const std::vector<fs::path>& excluded_paths = {});

// Creates a fresh empty directory, removing whatever was there.
void reset_directory(const fs::path& dir);

std::string generic_relative(const fs::path& path, const fs::path& base);

}  // namespace fc::util
