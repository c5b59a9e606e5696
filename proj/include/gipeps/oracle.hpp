#pragma once

#include "gipeps/geometry.hpp"
#include "gipeps/site.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gipeps {

/// Amplitudes over link configurations; bit i of a configuration is the value of links[i].
/// Only nonzero amplitudes are stored, sorted by configuration.
struct StateVector {
    Lattice lat;
    std::vector<Link> links;
    std::vector<std::uint64_t> configs;
    std::vector<double> amps;

    double norm() const;
    void normalize();
    double amplitude(std::uint64_t config) const;
    std::size_t link_index(const Link& l) const;
    std::size_t size() const { return configs.size(); }
};

StateVector contract_state(const GaugeSiteTensor& site, const Lattice& lat, std::size_t linkCap = 24);
double check_gauss(const StateVector& state);

struct RdmBlock {
    std::vector<int> charges;
    std::string label;
    std::vector<std::uint64_t> basis;  ///< region configurations, bit i = regionLinks[i]
    std::vector<double> matrix;        ///< row-major, trace = probability
    double probability = 0;
    std::size_t dim() const { return basis.size(); }
};

struct BlockedRDM {
    std::vector<StarPart> parts;
    std::vector<Link> regionLinks;
    std::vector<RdmBlock> blocks;
    double offBlockNorm = 0;
    /// probability of a sector; zero when it never occurs
    double probability(const std::vector<int>& charges) const;
    const RdmBlock* find(const std::vector<int>& charges) const;
};

BlockedRDM rdm_blocks(const StateVector& state, const LinkMask& region, std::size_t linkCap = 12);
BlockedRDM rdm_blocks(const StateVector& state, const Region& region, std::size_t linkCap = 12);

struct SectorEntropy {
    std::string label;
    std::vector<int> charges;
    double p = 0;
    double S = 0;       ///< -Tr rho_phi ln rho_phi
    double Sn = 0;      ///< ln(Tr rho_phi^n) / (1-n)
    double Sbar = 0;    ///< of the normalized block
    double Sbarn = 0;
    double p2bar = 0;   ///< Tr of the normalized block squared
    int rank = 0;       ///< normalized eigenvalues above 1e-10
    double minEigenvalue = 0;
    std::vector<double> eigenvalues;  ///< of the normalized block, descending
};

struct EntropyReport {
    double n = 2;
    double S = 0;
    double Sn = 0;
    double p2 = 0;
    std::vector<SectorEntropy> sectors;
    double probabilitySum() const;
    /// |sum_phi exp((1-n) Sn(phi)) - exp((1-n) Sn)|
    double renyiSumRule() const;
    /// |S - sum_phi S(phi)|
    double vnSumRule() const;
};

EntropyReport entropies(const BlockedRDM& blocks, double n = 2);
double decomposition_identity_check(const BlockedRDM& blocks);
double decomposition_identity_check(const EntropyReport& report);

StateVector build_confined_state(double kappaA, const Lattice& lat, int plaquetteCap = 20);
StateVector build_deconfined_state(double kappaP, const Lattice& lat, int plaquetteCap = 20);

/// <psi| prod sigma^x |psi> / <psi|psi> over the given links.
double wilson_expectation(const StateVector& state, const std::vector<Link>& loop);

struct ConfinedSrCheck {
    int R1 = 0, R2 = 0;
    double v0 = 0;
    double numericSbar = 0;
    double closedForm = 0;     ///< ln 2 + v0^2
    double exactSbar = 0;      ///< from the spectrum (1 +- v0)/2
    double gap = 0;            ///< |numericSbar - closedForm|
    double spectrumError = 0;  ///< max deviation of the block spectrum from (1 +- v0)/2
    std::vector<double> spectrum;
};

/// Region = links of an R1 x R2 plaquette block with a one-plaquette margin; sector charged at the
/// block's bottom-left and top-right corners.
ConfinedSrCheck confined_sr_entropy_check(double kappaA, int regionArea);
ConfinedSrCheck confined_sr_entropy_check(double kappaA, int R1, int R2, std::optional<std::vector<int>> charges = {});

/// Normalized SR purity of the vacuum sector for the region of the first `columns` columns.
double strip_sr_purity(const GaugeSiteTensor& site, const Lattice& lat, int columns, std::size_t regionCap = 16);
/// -log_d of the ratio of strip SR purities at heights Ly+1 and Ly.
double strip_sr_eta(const GaugeSiteTensor& site, int Lx, int Ly, int columns, int d = 2);

} // namespace gipeps
