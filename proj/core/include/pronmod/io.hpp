#pragma once

#include <string>
#include <vector>

namespace pronmod::io {

struct TsvLine {
    size_t number = 0; // 1-based line number in the file
    std::vector<std::string> fields;
};

// Reads a UTF-8, LF-terminated TSV file. Blank lines and lines starting
// with '#' are skipped. Throws IoError / ParseError.
std::vector<TsvLine> readTsv(const std::string& path);

std::vector<std::string> splitChar(const std::string& s, char sep);
std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& content);

// key=value run manifest, one entry per line, keys in insertion order.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, long long value);
    void set(const std::string& key, double value);
    std::string text() const;
    void save(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace pronmod::io
