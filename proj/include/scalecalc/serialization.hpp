#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "scalecalc/discrete_function.hpp"
#include "scalecalc/errors.hpp"
#include "scalecalc/scale_function.hpp"

namespace scalecalc {

/// Flat `key=value` manifest. Keys are written in sorted order so identical
/// content gives byte-identical files.
class Manifest {
public:
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    /// Throws ParseError when the key is missing.
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

    void write(const std::filesystem::path& path) const;
    static Manifest read(const std::filesystem::path& path);

private:
    std::map<std::string, std::string> entries_;
};

/// `<stem>.L<i>.csv`
std::filesystem::path level_csv_path(const std::filesystem::path& stem, std::size_t level);
/// `<stem>.manifest`
std::filesystem::path manifest_path(const std::filesystem::path& stem);

/// Splits a comma separated list, trimming blanks.
std::vector<std::string> split_list(const std::string& text, char sep = ',');

/// Reads a CSV written by write_csv. Exact files (`num,den,value`) keep
/// exact time points; decimal files parse the printed decimals exactly.
DiscreteFunction<double> read_csv(const std::filesystem::path& path);

/// Writes every level CSV and the manifest. `levels=` is filled in.
template <Scalar S>
void write_scale_function(const std::filesystem::path& stem, const ScaleFunction<S>& f, Manifest manifest, bool exact = false) {
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
    for (std::size_t i = 0; i < f.levels(); ++i) {
        std::ofstream os(level_csv_path(stem, i));
        if (!os) throw ParseError("cannot write " + level_csv_path(stem, i).string());
        write_csv(os, f.layer(i), exact);
    }
    manifest.set("levels", std::to_string(f.levels()));
    manifest.set("depth", std::to_string(f.depth()));
    manifest.set("refinement", to_string(f.kind()));
    manifest.write(manifest_path(stem));
}

/// Writes a scale-indexed family with the same naming convention.
template <Scalar S>
void write_family(const std::filesystem::path& stem, const ScaleFamily<S>& fam, Manifest manifest, bool exact = false) {
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
    for (std::size_t k = 0; k < fam.layers.size(); ++k) {
        std::ofstream os(level_csv_path(stem, fam.first_level + k));
        if (!os) throw ParseError("cannot write " + level_csv_path(stem, fam.first_level + k).string());
        write_csv(os, fam.layers[k], exact);
    }
    manifest.set("first_level", std::to_string(fam.first_level));
    manifest.set("levels", std::to_string(fam.layers.size()));
    manifest.write(manifest_path(stem));
}

}  // namespace scalecalc
