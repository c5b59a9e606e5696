#pragma once

#include "gipeps/site.hpp"
#include "gipeps/tensor.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace gipeps {

enum class Pattern { Trace, Swap };

/// Two layers identified on a physical link: charge(a) == charge(b), or != when flipped.
struct LayerPair {
    int a = 0;
    int b = 1;
    bool flip = false;
};

/// Per-layer parity constraint on a subset of the node's legs.
struct LegProjector {
    unsigned legMask = 0;
    int charge = 0;
};

/// Several copies (layers) of a site tensor with physical legs traced according to per-link pairings.
/// Leg index fuses layer indices with layer 0 most significant; extent D^layers.
/// Entries are generated on demand; dense() materializes the full tensor.
struct DoubledNode {
    std::shared_ptr<const GaugeSiteTensor> site;
    int layers = 2;
    std::array<std::vector<LayerPair>, 2> pairing;  ///< physical up link, physical right link
    std::vector<LegProjector> projectors;
    std::string pattern = "trace";

    std::size_t extent() const;
    std::vector<int> decode(std::size_t index) const;
    /// Index can carry weight on this leg given pairings and single-leg projectors.
    bool allowed(Leg leg, std::size_t index) const;
    double entry(std::size_t u, std::size_t r, std::size_t d, std::size_t l) const;
    /// Restriction to the given per-leg index lists, labels (u, r, d, l).
    LabeledTensor restrict(const std::array<std::vector<std::size_t>, 4>& supports) const;
    LabeledTensor dense(std::size_t cap = std::size_t{1} << 24) const;
};

DoubledNode doubled_traced_node(const GaugeSiteTensor& t);
DoubledNode doubled_traced_node(std::shared_ptr<const GaugeSiteTensor> t);
/// Layers (ket1, bra1, ket2, bra2).
DoubledNode quadrupled_node(const GaugeSiteTensor& t, Pattern p);
DoubledNode quadrupled_node(std::shared_ptr<const GaugeSiteTensor> t, Pattern up, Pattern right);
DoubledNode wilson_dress(const DoubledNode& node, bool upLink, bool rightLink);
DoubledNode sector_project(const DoubledNode& node, Leg leg, int charge);
DoubledNode corner_project(const DoubledNode& node, Leg a, Leg b, int totalCharge);
DoubledNode project_legs(const DoubledNode& node, unsigned legMask, int charge);

std::vector<std::size_t> leg_support(const DoubledNode& node, Leg leg);

} // namespace gipeps
