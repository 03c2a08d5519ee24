#include "scalecalc/serialization.hpp"

#include <sstream>

namespace scalecalc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::string& Manifest::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ParseError("manifest has no '" + key + "' entry");
    return it->second;
}

std::string Manifest::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

void Manifest::write(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot write " + path.string());
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

Manifest Manifest::read(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open manifest " + path.string());
    Manifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return m;
}

std::filesystem::path level_csv_path(const std::filesystem::path& stem, std::size_t level) {
    return stem.string() + ".L" + std::to_string(level) + ".csv";
}

std::filesystem::path manifest_path(const std::filesystem::path& stem) { return stem.string() + ".manifest"; }

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

DiscreteFunction<double> read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path.string());
    std::string header;
    if (!std::getline(is, header)) throw ParseError(path.string() + ": empty file");
    header = trim(header);
    const bool exact = header == "num,den,value";
    if (!exact && header != "t,value") throw ParseError(path.string() + ": unknown header '" + header + "'");

    std::vector<Rational> pts;
    std::vector<double> vals;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split_list(line);
        try {
            if (exact) {
                if (cols.size() != 3) throw ParseError("expected 3 columns");
                pts.push_back(Rational::parse(cols[0] + "/" + cols[1]));
                vals.push_back(Rational::parse(cols[2]).to_double());
            } else {
                if (cols.size() != 2) throw ParseError("expected 2 columns");
                pts.push_back(Rational::parse(cols[0]));
                vals.push_back(std::stod(cols[1]));
            }
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return DiscreteFunction<double>(TimeScale(std::move(pts)), std::move(vals));
}

}  // namespace scalecalc
