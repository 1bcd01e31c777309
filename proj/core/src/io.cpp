#include "pronmod/io.hpp"

#include <fstream>
#include <sstream>

#include "pronmod/errors.hpp"

namespace pronmod::io {

std::vector<std::string> splitChar(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::vector<TsvLine> readTsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::vector<TsvLine> out;
    std::string line;
    size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(TsvLine{number, splitChar(line, '\t')});
    }
    return out;
}

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_) {
        if (e.first == key) {
            e.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, long long value) {
    set(key, std::to_string(value));
}

void Manifest::set(const std::string& key, double value) {
    std::ostringstream ss;
    ss << value;
    set(key, ss.str());
}

std::string Manifest::text() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

void Manifest::save(const std::string& path) const {
    writeFile(path, text());
}

} // namespace pronmod::io
