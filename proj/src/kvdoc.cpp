#include "mcqkd/kvdoc.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mcqkd/errors.hpp"

namespace mcqkd::kv {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool Section::has(const std::string& key) const { return find(key) != nullptr; }

const std::string* Section::find(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

const std::string& Section::get(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw ParseError("section [" + name + "]: missing key '" + key + "'");
    return *v;
}

std::string Section::get_or(const std::string& key, const std::string& def) const {
    const std::string* v = find(key);
    return v ? *v : def;
}

namespace {

double parse_double(const Section& s, const std::string& key, const std::string& text) {
    // std::stod accepts exponents ("50e6") which from_chars also handles.
    double value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw ParseError("section [" + s.name + "]: key '" + key + "' is not a number: '" + text + "'");
    return value;
}

std::int64_t parse_int(const Section& s, const std::string& key, const std::string& text) {
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw ParseError("section [" + s.name + "]: key '" + key + "' is not an integer: '" + text + "'");
    return value;
}

} // namespace

double Section::get_double(const std::string& key) const { return parse_double(*this, key, get(key)); }

double Section::get_double_or(const std::string& key, double def) const {
    const std::string* v = find(key);
    return v ? parse_double(*this, key, *v) : def;
}

std::int64_t Section::get_int(const std::string& key) const { return parse_int(*this, key, get(key)); }

std::int64_t Section::get_int_or(const std::string& key, std::int64_t def) const {
    const std::string* v = find(key);
    return v ? parse_int(*this, key, *v) : def;
}

bool Section::get_bool_or(const std::string& key, bool def) const {
    const std::string* v = find(key);
    if (!v) return def;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ParseError("section [" + name + "]: key '" + key + "' is not a boolean: '" + *v + "'");
}

void Section::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries)
        if (k == key) {
            v = value;
            return;
        }
    entries.emplace_back(key, value);
}

std::vector<const Section*> Document::all(const std::string& name) const {
    std::vector<const Section*> out;
    for (const auto& s : sections)
        if (s.name == name) out.push_back(&s);
    return out;
}

const Section* Document::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

const Section& Document::require(const std::string& name) const {
    const Section* s = find(name);
    if (!s) throw ParseError(source + ": missing required section [" + name + "]");
    return *s;
}

Document parse(const std::string& text, const std::string& source_name) {
    Document doc;
    doc.source = source_name;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    Section* current = nullptr;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(source_name + ":" + std::to_string(line_no) + ": malformed section header '" + line + "'");
            Section s;
            s.name = trim(line.substr(1, line.size() - 2));
            s.line = line_no;
            if (s.name.empty())
                throw ParseError(source_name + ":" + std::to_string(line_no) + ": empty section name");
            doc.sections.push_back(std::move(s));
            current = &doc.sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
        if (!current)
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": empty key");
        if (current->has(key))
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "' in section [" + current->name + "]");
        current->entries.emplace_back(std::move(key), std::move(value));
    }
    return doc;
}

Document load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string serialize(const Document& doc) {
    std::string out;
    bool first = true;
    for (const auto& s : doc.sections) {
        if (!first) out += "\n";
        first = false;
        out += "[" + s.name + "]\n";
        for (const auto& [k, v] : s.entries) out += k + " = " + v + "\n";
    }
    return out;
}

} // namespace mcqkd::kv
