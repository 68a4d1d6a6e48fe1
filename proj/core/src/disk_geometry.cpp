#include "mslab/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mslab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_depths(const std::vector<double>& depths) {
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (!(depths[i] > 0.0 && depths[i] < 1.0))
            throw DiskDomainError("depths must lie in (0,1)");
        if (i > 0 && !(depths[i] > depths[i - 1]))
            throw DiskDomainError("depths must be strictly increasing");
    }
}

// Point at |z| = r whose Stolz ratio at vertex 1 is exactly beta; rotated
// to the region's vertex afterwards. Requires beta < (1+r)/(1-r). The
// half-angle form keeps the angle accurate when 1 - r is near rounding,
// where an acos of a near-1 cosine would lose it entirely.
cplx ray_point(double r, double beta) {
    const double x = (beta * beta - 1.0) * (1.0 - r) * (1.0 - r) / (2.0 * r);
    const double psi = 2.0 * std::asin(std::sqrt(std::clamp(0.5 * x, 0.0, 1.0)));
    return std::polar(r, psi);
}

double ray_angle(const StolzRegion& region, std::size_t ray, std::size_t rays) {
    const double phi_max = 0.95 * std::acos(1.0 / region.aperture);
    if (rays == 1) return 0.0;
    return phi_max * static_cast<double>(ray) / static_cast<double>(rays - 1);
}

struct SweepEntry {
    double chord;
    std::size_t ray;
    std::size_t depth_index;
    double r;
    double beta;
};

std::vector<SweepEntry> sweep_entries(const StolzRegion& region,
                                      std::size_t rays,
                                      const std::vector<double>& depths) {
    if (rays < 1)
        throw DiskDomainError("at least one ray is required");
    check_depths(depths);
    std::vector<SweepEntry> entries;
    for (std::size_t k = 0; k < rays; ++k) {
        const double beta = 1.0 / std::cos(ray_angle(region, k, rays));
        for (std::size_t d = 0; d < depths.size(); ++d) {
            const double r = depths[d];
            if (beta >= (1.0 + r) / (1.0 - r))
                continue;
            entries.push_back({beta * (1.0 - r), k, d, r, beta});
        }
    }
    return entries;
}

} // namespace

StolzRegion::StolzRegion(cplx vertex, double aperture)
    : vertex(vertex), aperture(aperture) {
    if (std::abs(std::abs(vertex) - 1.0) > 1e-14)
        throw DiskDomainError("Stolz vertex must be unimodular");
    if (!(aperture > 1.0))
        throw DiskDomainError("Stolz aperture must exceed 1");
}

CircleGrid::CircleGrid(std::size_t size) : size_(size) {
    if (size < 16 || !is_power_of_two(size))
        throw DiskDomainError("circle grid size must be a power of two >= 16");
}

double CircleGrid::theta(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size_);
}

cplx CircleGrid::node(std::size_t j) const {
    return std::polar(1.0, theta(j));
}

double pseudohyperbolic_distance(cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
        throw DiskDomainError("pseudohyperbolic distance requires interior points");
    return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

bool stolz_contains(const StolzRegion& region, cplx z) {
    const double mod = std::abs(z);
    if (mod >= 1.0)
        throw DiskDomainError("Stolz membership requires an interior point");
    return std::abs(z - region.vertex) / (1.0 - mod) < region.aperture;
}

std::vector<std::vector<cplx>> stolz_rays(const StolzRegion& region,
                                          std::size_t rays,
                                          const std::vector<double>& depths) {
    std::vector<std::vector<cplx>> out(rays);
    for (const SweepEntry& e : sweep_entries(region, rays, depths)) {
        cplx z = region.vertex * ray_point(e.r, e.beta);
        if (!stolz_contains(region, z))
            throw ValidationError("generated Stolz sample left its region");
        out[e.ray].push_back(z);
    }
    return out;
}

ApproachSequence stolz_sample(const StolzRegion& region,
                              std::size_t rays,
                              const std::vector<double>& depths) {
    std::vector<SweepEntry> entries = sweep_entries(region, rays, depths);

    std::sort(entries.begin(), entries.end(), [](const SweepEntry& x, const SweepEntry& y) {
        if (x.chord != y.chord) return x.chord > y.chord;
        if (x.ray != y.ray) return x.ray < y.ray;
        return x.depth_index < y.depth_index;
    });

    // Equal chords break the strict-decrease invariant; within each tie
    // group, shrink 1-r of members after the first by a deterministic
    // relative nudge growing with position.
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].chord == entries[i].chord)
            ++j;
        for (std::size_t t = i + 1; t < j; ++t) {
            const double shrink = 1.0 - 1e-9 * static_cast<double>(t - i);
            entries[t].r = 1.0 - (1.0 - entries[t].r) * shrink;
            entries[t].chord = entries[t].beta * (1.0 - entries[t].r);
        }
        i = j;
    }

    ApproachSequence seq;
    seq.vertex = region.vertex;
    seq.points.reserve(entries.size());
    for (const SweepEntry& e : entries) {
        cplx z = region.vertex * ray_point(e.r, e.beta);
        if (!stolz_contains(region, z))
            throw ValidationError("generated Stolz sample left its region");
        seq.points.push_back(z);
    }
    for (std::size_t i = 1; i < seq.points.size(); ++i) {
        if (!(std::abs(seq.points[i] - seq.vertex) < std::abs(seq.points[i - 1] - seq.vertex)))
            throw ValidationError("approach sequence is not strictly decreasing toward the vertex");
    }
    return seq;
}

} // namespace mslab
