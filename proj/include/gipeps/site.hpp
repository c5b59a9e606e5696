#pragma once

#include "gipeps/tensor.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gipeps {

enum Leg : int { Up = 0, Right = 1, Down = 2, Left = 3 };
inline constexpr std::array<const char*, 4> kLegNames{"u", "r", "d", "l"};

/// Z2-graded virtual leg; index = charge*m + multiplicity.
struct ChargeLeg {
    int d = 2;
    int m = 1;
    int extent() const { return d * m; }
    int charge(int index) const { return index / m; }
    int multiplicity(int index) const { return index % m; }
};

struct MinimalModelParams {
    double alpha = 1, beta = 0, gamma = 0, delta = 0;
};

/// Rank-4 site tensor over (up, right, down, left); physical legs repeat the up/right charges.
struct GaugeSiteTensor {
    std::array<ChargeLeg, 4> legs{};
    LabeledTensor data;
    std::string model;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;

    int D() const { return legs[0].extent(); }
    int m() const { return legs[0].m; }
    double operator()(int u, int r, int d, int l) const
    {
        const int D_ = D();
        return data.data()[((static_cast<std::size_t>(u) * D_ + r) * D_ + d) * D_ + l];
    }
};

LabeledTensor constraint_mask(const std::array<ChargeLeg, 4>& legs);

GaugeSiteTensor minimal_model(const MinimalModelParams& p);
GaugeSiteTensor toric_code();
GaugeSiteTensor random_gauge_tensor(int D, double mu, double sigma, std::uint64_t seed);
/// D=4 tensor whose contraction is prod_p (1 + kappa X_p)|0> up to normalization.
GaugeSiteTensor confined_site_tensor(double kappaA);

GaugeSiteTensor scaled(const GaugeSiteTensor& t, double c);
/// Tensor rotated by a quarter turn: T'(u,r,d,l) = T(l,u,r,d).
GaugeSiteTensor rotated(const GaugeSiteTensor& t);
bool satisfies_mask(const GaugeSiteTensor& t);

/// JSON header (d, m, model, params, seed) followed by the tensor text dump.
std::string header_json(const GaugeSiteTensor& t);
void save_site(const GaugeSiteTensor& t, std::ostream& os);
GaugeSiteTensor load_site(std::istream& is);

} // namespace gipeps
