#pragma once

#include "gipeps/errors.hpp"
#include "gipeps/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace gipeps {

struct SvdResult {
    LabeledTensor U;  ///< rowLegs..., bond
    std::vector<double> S;
    LabeledTensor V;  ///< bond, colLegs...
    double discardedWeight = 0;
};

SvdResult truncated_svd(const LabeledTensor& a, const std::vector<std::string>& rowLegs,
                        const std::vector<std::string>& colLegs, std::size_t chi, double cutoff,
                        const std::string& bond = "k");

/// Thin QR: Q carries rowLegs + bond, R carries bond + colLegs.
std::pair<LabeledTensor, LabeledTensor> thin_qr(const LabeledTensor& a, const std::vector<std::string>& rowLegs,
                                                const std::vector<std::string>& colLegs,
                                                const std::string& bond = "k");

/// Eigenvalues (ascending) of a symmetric matrix stored row-major n x n.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, std::size_t n);

/// Uniform(0,1) entries from mt19937_64 seeded with `seed`.
LabeledTensor random_positive(const std::vector<std::string>& labels, const std::vector<std::size_t>& dims,
                              std::uint64_t seed);

struct EigOptions {
    double tol = 1e-10;
    int maxIter = 10000;
    /// relative tolerance for accepting a definite sign of the eigenvalue
    double signTol = 1e-6;
};

template <class Vec>
struct EigResult {
    double value = 0;
    Vec vector{};
    int iterations = 0;
    double residual = 0;
    /// dominant pair ±value; value carries magnitude only
    bool oscillating = false;
};

/// Vector-space operations a boundary-state type must provide for power iteration.
template <class Vec>
struct VecOps {
    std::function<Vec(const Vec&)> apply;
    std::function<double(const Vec&, const Vec&)> dot;
    std::function<Vec(const Vec&, double)> scale;
};

/// Power iteration with a two-step Rayleigh estimate <v, E^2 v> so that a ±lambda pair converges too.
/// The one-step overlap fixes the sign when it is consistent with the two-step magnitude.
template <class Vec>
EigResult<Vec> power_iterate(const VecOps<Vec>& ops, const Vec& seed, const EigOptions& opt)
{
    if (!(opt.tol > 0))
        throw Error("leading_eig: tol must be positive");
    auto norm = [&](const Vec& x) { return std::sqrt(std::max(0.0, ops.dot(x, x))); };
    constexpr double tiny = 1e-250;

    double n0 = norm(seed);
    if (!(n0 > tiny))
        throw ZeroOperator("leading_eig: seed vector has zero norm");
    Vec v = ops.scale(seed, 1.0 / n0);
    Vec vPrev;
    double nPrev = 0, rho2 = 0, rho2Old = 0, rho1 = 0, nw = 0, prevDot = 0;
    bool havePrev = false, haveRho2 = false;
    int k = 0;
    bool converged = false;
    Vec w;
    for (k = 1; k <= opt.maxIter; ++k) {
        w = ops.apply(v);
        nw = norm(w);
        if (!(nw > tiny) || !std::isfinite(nw))
            throw ZeroOperator("leading_eig: applied vector norm underflowed");
        rho1 = ops.dot(v, w);
        if (havePrev) {
            prevDot = ops.dot(vPrev, w);
            rho2Old = rho2;
            rho2 = nPrev * prevDot;
            if (haveRho2 && std::abs(rho2 - rho2Old) < opt.tol * std::abs(rho2)) {
                converged = true;
                break;
            }
            haveRho2 = true;
        }
        vPrev = v;
        nPrev = nw;
        havePrev = true;
        v = ops.scale(w, 1.0 / nw);
    }

    EigResult<Vec> res;
    res.iterations = std::min(k, opt.maxIter);
    double lam = std::sqrt(std::abs(rho2));
    // residual of E^2 on vPrev: || nPrev w - lam^2 vPrev || / lam^2
    double l2 = lam * lam;
    double r2 = nPrev * nPrev * nw * nw + l2 * l2 - 2 * nPrev * l2 * prevDot;
    double resid2 = l2 > 0 ? std::sqrt(std::max(0.0, r2)) / l2 : std::numeric_limits<double>::infinity();

    if (rho2 > 0 && std::abs(std::abs(rho1) - lam) <= opt.signTol * lam) {
        res.value = rho1 > 0 ? lam : -lam;
        double r1 = nw * nw + l2 - 2 * res.value * rho1;
        res.residual = std::sqrt(std::max(0.0, r1)) / lam;
    } else {
        res.value = lam;
        res.oscillating = true;
        res.residual = resid2;
    }
    res.vector = ops.scale(w, 1.0 / nw);
    if (!converged)
        throw NonConvergence("leading_eig: no convergence after " + std::to_string(opt.maxIter) +
                                 " iterations (residual " + std::to_string(res.residual) + ")",
                             res.residual, opt.maxIter);
    return res;
}

/// Dense operator on LabeledTensor boundary states.
EigResult<LabeledTensor> leading_eig(const std::function<LabeledTensor(const LabeledTensor&)>& apply,
                                     const LabeledTensor& seed, const EigOptions& opt = {});

} // namespace gipeps
