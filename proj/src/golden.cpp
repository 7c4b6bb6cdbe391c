#include "gmdet/golden.hpp"

#include <regex>
#include <sstream>

#include "gmdet/errors.hpp"

namespace gmdet {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

GoldenFile::GoldenFile(std::string name, const std::string& body) : name_(std::move(name)) {
    std::vector<std::pair<std::regex, std::string>> macros;
    std::istringstream in(body);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw Error(ErrorKind::MalformedInput, name_ + ".golden:" + std::to_string(line) + ": " + msg);
        };
        bool macro = false;
        auto pos = s.find(":=");
        if (pos != std::string::npos) {
            macro = true;
        } else {
            pos = s.find('=');
            if (pos == std::string::npos) fail("expected 'key = expression'");
        }
        std::string key = trim(s.substr(0, pos));
        std::string text = trim(s.substr(pos + (macro ? 2 : 1)));
        if (key.empty() || text.empty()) fail("empty key or expression");
        for (const auto& [re, repl] : macros) text = std::regex_replace(text, re, repl);
        if (macro) {
            if (key.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789") !=
                std::string::npos)
                fail("macro names must be identifiers");
            macros.emplace_back(std::regex("\\b" + key + "\\b"), "(" + text + ")");
            continue;
        }
        if (contains(key)) fail("duplicate key " + key);
        entries_.push_back({key, text, line});
    }
}

bool GoldenFile::contains(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return true;
    return false;
}

const GoldenEntry& GoldenFile::at(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e;
    throw Error(ErrorKind::MalformedInput, name_ + ".golden: missing key " + key);
}

GoldenFile golden(const std::string& name) {
    const auto& files = embedded_golden_files();
    auto it = files.find(name);
    if (it == files.end()) throw Error(ErrorKind::MalformedInput, "no golden file named " + name);
    return GoldenFile(name, it->second);
}

}  // namespace gmdet
