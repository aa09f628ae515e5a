#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mcqkd::kv {

// Minimal key-value tree used by every structured text file in this project:
//
//   # comment
//   [section]          sections may repeat (e.g. [channel])
//   key = value
//
// Keys are unique within a section; values are taken verbatim after trimming.

struct Section {
    std::string name;
    int line = 0; // 1-based line of the [section] header
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    const std::string* find(const std::string& key) const;
    const std::string& get(const std::string& key) const; // throws ParseError
    std::string get_or(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t def) const;
    bool get_bool_or(const std::string& key, bool def) const;

    void set(const std::string& key, const std::string& value);
};

struct Document {
    std::string source; // file name used in diagnostics
    std::vector<Section> sections;

    std::vector<const Section*> all(const std::string& name) const;
    const Section* find(const std::string& name) const;    // first match or nullptr
    const Section& require(const std::string& name) const; // throws ParseError
};

Document parse(const std::string& text, const std::string& source_name);
Document load_file(const std::string& path);

// Deterministic writer: sections and entries in stored order.
std::string serialize(const Document& doc);

std::string trim(const std::string& s);

} // namespace mcqkd::kv
