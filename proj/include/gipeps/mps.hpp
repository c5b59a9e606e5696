#pragma once

#include "gipeps/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gipeps {

/// Open-boundary MPS; each site tensor has legs (a, p, b).
struct Mps {
    std::vector<LabeledTensor> sites;
    std::size_t length() const { return sites.size(); }
};

Mps product_mps(const std::vector<std::size_t>& physDims);
/// Bond-1 MPS with uniform(0,1) entries from mt19937_64.
Mps random_product_mps(const std::vector<std::size_t>& physDims, std::uint64_t seed);

/// Row of nodes with legs (u, r, d, l); the MPS physical leg is contracted with d and replaced by u.
Mps apply_row(const Mps& psi, const std::vector<LabeledTensor>& nodes);
/// Canonicalize and truncate every bond; returns the summed discarded weight.
double compress(Mps& psi, std::size_t chi, double cutoff);

double overlap(const Mps& a, const Mps& b);
Mps scaled(const Mps& a, double s);
/// Dense state with legs named p0, p1, ...
LabeledTensor to_dense(const Mps& a);

} // namespace gipeps
