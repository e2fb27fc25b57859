#ifndef ROSTOP_IO_HPP
#define ROSTOP_IO_HPP

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rostop/instance.hpp"
#include "rostop/paths.hpp"

namespace rostop {

// CSV files carry a mandatory header and 1-based path, period and dimension
// indices. Reals are written with 17 significant digits so they round-trip.

void write_paths_csv(std::ostream& out, const PathTensor& paths);
PathTensor read_paths_csv(std::istream& in);

void write_rewards_csv(std::ostream& out, const RewardMatrix& rewards);
RewardMatrix read_rewards_csv(std::istream& in);

void write_sigma_csv(std::ostream& out, const SigmaPolicy& policy);
SigmaPolicy read_sigma_csv(std::istream& in);

/// Binary instance file: magic "ROSTOPI", a version byte, N, T, d as
/// little-endian uint64, epsilon, then states and rewards as doubles. The
/// derived tables are rebuilt on load.
void write_instance(std::ostream& out, const RobustInstance& instance);
RobustInstance read_instance(std::istream& in);

/// Flat "key = value" text; '#' starts a comment. Duplicate keys are errors.
std::map<std::string, std::string> parse_key_values(std::istream& in);

std::string format_real(double v);
double parse_real(const std::string& text, const std::string& what);
std::size_t parse_count(const std::string& text, const std::string& what);

std::ifstream open_input(const std::string& path, bool binary = false);
std::ofstream open_output(const std::string& path, bool binary = false);

}  // namespace rostop

#endif  // ROSTOP_IO_HPP
