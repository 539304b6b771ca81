#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fc::instrument {

// Result of comparing an original tree with its instrumented copy after
// undoing every recognized wrapper.
struct DiffReport {
    std::map<std::string, std::vector<std::string>> wrapped;  // file -> signatures, sorted
    std::vector<std::string> added_files;                     // present only in the copy
    std::vector<std::string> corrupted;                       // "file: reason"

    bool identical_modulo_wrappers() const { return corrupted.empty(); }
};

// Reverses instrument_source() on one file. Returns the recovered original
// text and appends wrapped signatures; throws InstrumentError on text that is
// not a well-formed wrapper.
std::string uninstrument_source(const std::string& instrumented, std::vector<std::string>* signatures = nullptr);

DiffReport uninstrument_diff(const std::filesystem::path& original, const std::filesystem::path& instrumented);

}  // namespace fc::instrument
