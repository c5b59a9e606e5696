#pragma once

#include "gipeps/site.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gipeps {

/// Open square lattice; site (x, y) owns link up(x,y) if y < Ly-1 and right(x,y) if x < Lx-1.
struct Lattice {
    int Lx = 1;
    int Ly = 1;

    Lattice() = default;
    Lattice(int lx, int ly);
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < Lx && y < Ly; }
    bool hasUp(int x, int y) const { return contains(x, y) && y < Ly - 1; }
    bool hasRight(int x, int y) const { return contains(x, y) && x < Lx - 1; }
    int linkCount() const { return Lx * (Ly - 1) + (Lx - 1) * Ly; }
    int plaquetteCount() const { return (Lx - 1) * (Ly - 1); }
};

struct Link {
    int x = 0, y = 0;
    bool up = true;
    bool operator==(const Link&) const = default;
};

/// Row-major over sites, up link before right link.
std::vector<Link> link_order(const Lattice& lat);

struct Site {
    int x = 0, y = 0;
    bool operator==(const Site&) const = default;
    auto operator<=>(const Site&) const = default;
};

struct Region {
    enum class Shape { Rectangle, Stairs, Custom };
    Shape shape = Shape::Rectangle;
    int R1 = 1, R2 = 1;  ///< rectangle width, height
    int L = 0, c = 0;    ///< stairs side and step count
    std::optional<Site> offset;  ///< bottom-left anchor; centered when absent
    bool allOdd = false;  ///< move a link across each bottom-left corner so every star part is odd
    std::vector<Site> sites;  ///< custom shapes only

    static Region rectangle(int R1, int R2, std::optional<Site> offset = {});
    static Region stairs(int L, int c, std::optional<Site> offset = {}, bool allOdd = false);
    static Region custom(std::vector<Site> sites);
};

/// Per-site membership of the owned up/right links.
struct LinkMask {
    int Lx = 0, Ly = 0;
    std::vector<char> up, right;
    bool inUp(int x, int y) const { return up[static_cast<std::size_t>(y * Lx + x)] != 0; }
    bool inRight(int x, int y) const { return right[static_cast<std::size_t>(y * Lx + x)] != 0; }
    int count() const;
};

std::vector<Site> region_sites(const Lattice& lat, const Region& reg);
LinkMask region_links(const Lattice& lat, const Region& reg);
/// Mask from an explicit link list.
LinkMask mask_from_links(const Lattice& lat, const std::vector<Link>& links);

struct StarPart {
    Site center;
    std::vector<Leg> inside;   ///< legs of the center's star whose links lie in the region
    std::vector<Leg> outside;  ///< existing links outside the region
    int size() const { return static_cast<int>(inside.size()); }
    /// Even split of a full four-link star.
    bool corner() const { return inside.size() == 2 && outside.size() == 2; }
    std::string kind() const { return corner() ? "corner" : "edge"; }
};

std::vector<StarPart> boundary_star_parts(const Lattice& lat, const Region& reg);
/// Star parts for an arbitrary link set; regions may touch the lattice edge.
std::vector<StarPart> cut_star_parts(const Lattice& lat, const LinkMask& mask);
int count_contributing_corners(const std::vector<StarPart>& parts);
/// Number of links of the region whose star at one end is cut, i.e. cut-bond count.
int boundary_length(const Lattice& lat, const LinkMask& mask);

struct FluxSector {
    std::vector<StarPart> parts;
    std::vector<int> charges;
    std::string label() const;
    bool admissible() const;
};

std::vector<FluxSector> enumerate_sectors(const std::vector<StarPart>& parts, bool onlyAdmissible,
                                          std::size_t limit = 16);
FluxSector vacuum_sector(const std::vector<StarPart>& parts);
/// Seeded random sector with even total parity.
FluxSector random_admissible_sector(const std::vector<StarPart>& parts, std::uint64_t seed);

} // namespace gipeps
