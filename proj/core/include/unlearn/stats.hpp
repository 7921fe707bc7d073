#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace unlearn {

/// Exact two-sample Kolmogorov-Smirnov statistic, sup_x |ECDF1 - ECDF2|.
double two_sample_ks(std::span<const double> s1, std::span<const double> s2);

/// Mean two-sample KS over the projections of both samples onto the given
/// unit directions.
double ks_phi_directions(const std::vector<std::vector<double>>& s1,
                         const std::vector<std::vector<double>>& s2,
                         const std::vector<std::vector<double>>& directions);

/// Mean two-sample KS over `num_directions` random unit directions
/// (normalized standard-normal draws; degenerate draws are re-sampled).
double ks_phi(const std::vector<std::vector<double>>& s1,
              const std::vector<std::vector<double>>& s2,
              std::size_t num_directions, std::uint64_t seed);

} // namespace unlearn
