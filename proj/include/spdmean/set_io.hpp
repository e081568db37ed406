#pragma once

// Text formats for matrix sets and generator ground truth.
//
//   spdset v1 N=<n> K=<k>
//   <index> <n(n+1)/2 upper-triangular entries, row-major>      (K lines)
//
//   spdtruth v1 N=<n> K=<k>
//   A <n*n entries, row-major>
//   D <index> <n diagonal entries>                              (K lines)
//   rng <generator name>
//   regenerated <count>
//
// Readers stop after the D records, so the trailing metadata is informational.
//
// Indices are 0-based. Numbers use the shortest decimal form that parses
// back to the identical double.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spdmean/matrix_set.hpp"
#include "spdmean/simgen.hpp"

namespace spdmean {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

void write_spdset(std::ostream& os, const MatrixSet& set);
MatrixSet read_spdset(std::istream& is);

struct GroundTruth {
    Matrix a_true;
    std::vector<Vector> d_true;
};

void write_spdtruth(std::ostream& os, const GeneratedSet& g);
GroundTruth read_spdtruth(std::istream& is);

void save_spdset(const std::filesystem::path& path, const MatrixSet& set);
MatrixSet load_spdset(const std::filesystem::path& path);
void save_spdtruth(const std::filesystem::path& path, const GeneratedSet& g);
GroundTruth load_spdtruth(const std::filesystem::path& path);

/// Sibling path for the ground-truth file: "<stem>.truth<ext>".
std::filesystem::path truth_path_for(const std::filesystem::path& set_path);

}  // namespace spdmean
