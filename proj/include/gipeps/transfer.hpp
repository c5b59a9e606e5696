#pragma once

#include "gipeps/geometry.hpp"
#include "gipeps/linalg.hpp"
#include "gipeps/node.hpp"
#include "gipeps/site.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gipeps {

struct Backend {
    enum class Kind { Dense, Bmps };
    Kind kind = Kind::Dense;
    std::size_t chi = 64;
    double cutoff = 1e-12;
    double tol = 1e-10;
    int maxIter = 10000;
    /// bound on the boundary-state dimension of the dense backend
    std::size_t denseCap = std::size_t{1} << 20;

    static Backend dense(double tol = 1e-10);
    static Backend bmps(std::size_t chi = 64, double cutoff = 1e-12, double tol = 1e-8);
    std::string name() const { return kind == Kind::Dense ? "dense" : "bmps"; }
};

struct TransferRow {
    std::vector<DoubledNode> nodes;
    int layerCount = 2;
    std::vector<int> dressedColumns;
    std::vector<int> projectedColumns;
    std::size_t width() const { return nodes.size(); }
};

struct Interval {
    int begin = 0;
    int end = 0;
    bool empty() const { return end <= begin; }
};

/// Charges on the crossing legs at the interval's left and right edges.
struct RowSector {
    int left = 0;
    int right = 0;
};

TransferRow build_E(const GaugeSiteTensor& site, int W);
TransferRow build_E_parallel(const GaugeSiteTensor& site, int W, int R);
/// Swap-pattern nodes inside the interval, trace outside; with a sector the crossing legs are projected.
/// inside = Trace gives the matching reference row.
TransferRow build_E_purity(const GaugeSiteTensor& site, int W, Interval region, std::optional<RowSector> sector,
                           Pattern inside = Pattern::Swap);

std::vector<std::vector<std::size_t>> vertical_supports(const TransferRow& row);
std::vector<LabeledTensor> restricted_row(const TransferRow& row);
/// Dense zipper: vector legs v0..v{W-1} through nodes with legs (u, r, d, l).
LabeledTensor apply_dense_row(const LabeledTensor& vec, const std::vector<LabeledTensor>& nodes);

struct Leading {
    double value = 0;
    int iterations = 0;
    double residual = 0;
    bool oscillating = false;
    double truncation = 0;
};

Leading leading_eigenvalue(const TransferRow& row, const Backend& backend, std::uint64_t seed = 1);

struct RatioResult {
    Leading rPrime;
    Leading r;
    double ratio = 0;
};

RatioResult leading_ratio(const TransferRow& siteRow, const TransferRow& baseRow, const Backend& backend,
                          std::uint64_t seed = 1);

// finite lattices

struct Grid {
    int Lx = 0, Ly = 0;
    std::vector<DoubledNode> nodes;  ///< row-major, index y*Lx + x
    DoubledNode& at(int x, int y) { return nodes[static_cast<std::size_t>(y * Lx + x)]; }
    const DoubledNode& at(int x, int y) const { return nodes[static_cast<std::size_t>(y * Lx + x)]; }
};

struct LogValue {
    double sign = 1;
    double logAbs = 0;
    double value() const;
};

Grid doubled_grid(const GaugeSiteTensor& site, const Lattice& lat);
/// Links in the mask get the swap pattern; a sector projects its star parts on all four layers.
Grid purity_grid(const GaugeSiteTensor& site, const Lattice& lat, const LinkMask& swapLinks,
                 const std::optional<FluxSector>& sector);
/// Project the star parts of a sector onto every layer of the grid.
void project_sector(Grid& grid, const FluxSector& sector);
LogValue contract_grid(const Grid& grid, const Backend& backend);

/// Tr(rho_A^2), or the normalized block purity when a sector is given.
double finite_p2(const GaugeSiteTensor& site, const Lattice& lat, const LinkMask& region,
                 const std::optional<FluxSector>& sector, const Backend& backend);
/// Probability of a flux sector from a projected two-layer contraction.
double sector_probability(const GaugeSiteTensor& site, const Lattice& lat, const FluxSector& sector,
                          const Backend& backend);

struct Loop {
    int R1 = 1, R2 = 1;
    std::optional<Site> offset;  ///< bottom-left site of the loop; centered when absent
};
std::vector<Link> loop_links(const Lattice& lat, const Loop& loop);
double wilson_expectation_finite(const GaugeSiteTensor& site, const Lattice& lat, const Loop& loop,
                                 const Backend& backend);

// fits and estimators

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double rSquared = 0;
    int pointCount = 0;
    std::vector<std::string> diagnostics;
};

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct PointRecord {
    std::string experiment;
    int W = 0;
    double x = 0;  ///< R or c
    std::string sector;
    double value = 0;
    double residual = 0;
    std::string backend;
    std::size_t chi = 0;
    std::uint64_t seed = 0;
};

void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const std::vector<PointRecord>& points);

struct KappaResult {
    FitResult fit;
    double kappa = 0;
    double Gamma = 0;
    std::vector<PointRecord> points;
};

KappaResult estimate_kappa(const GaugeSiteTensor& site, int W, const std::vector<int>& Rlist,
                           const Backend& backend, std::uint64_t seed = 1, int threads = 1);

struct EtaResult {
    std::vector<int> R;
    std::vector<double> eta;
    double mean = 0;
    double spread = 0;
    FitResult fit;
    std::vector<PointRecord> points;
};

/// Region = columns [0, R) of a width-W strip; sector charge on the single crossing leg.
EtaResult estimate_eta(const GaugeSiteTensor& site, int W, const std::vector<int>& Rlist,
                       std::optional<int> sectorCharge, const Backend& backend, int d = 2,
                       std::uint64_t seed = 1, int threads = 1);

struct SectorSpec {
    enum class Kind { Vacuum, Random, Explicit };
    Kind kind = Kind::Vacuum;
    std::uint64_t seed = 0;
    std::vector<int> charges;
    FluxSector resolve(const std::vector<StarPart>& parts) const;
    std::string name() const;
};

struct CornerResult {
    FitResult fit;
    std::vector<int> c;
    std::vector<int> contributing;
    std::vector<int> boundary;
    std::vector<double> minusLogP2;
    std::vector<PointRecord> points;
    std::vector<std::string> warnings;
};

/// Stairs(L, c) centered in an (L + 2*margin)^2 lattice; -ln p2(phi) fitted against c.
CornerResult corner_law_fit(const GaugeSiteTensor& site, int L, const std::vector<int>& cList,
                            const SectorSpec& sector, const Backend& backend, int margin = 1,
                            bool allOdd = false, int threads = 1);

} // namespace gipeps
