#pragma once

#include <map>
#include <string>
#include <vector>

namespace gmdet {

/// Expected values in the expression grammar, one "key = expression" per
/// line. "name := text" defines a macro that is substituted, parenthesized
/// and on word boundaries, into later lines. '#' starts a comment.
struct GoldenEntry {
    std::string key;
    std::string text;  // macros expanded
    int line = 0;
};

class GoldenFile {
public:
    GoldenFile() = default;
    GoldenFile(std::string name, const std::string& body);

    const std::string& name() const { return name_; }
    const std::vector<GoldenEntry>& entries() const { return entries_; }
    bool contains(const std::string& key) const;
    /// Throws malformed-input naming the file when the key is missing.
    const GoldenEntry& at(const std::string& key) const;

private:
    std::string name_;
    std::vector<GoldenEntry> entries_;
};

/// Raw contents of data/kloosterman/*.golden keyed by stem, embedded at build time.
const std::map<std::string, std::string>& embedded_golden_files();
/// Parsed embedded file; throws malformed-input for unknown names.
GoldenFile golden(const std::string& name);

}  // namespace gmdet
