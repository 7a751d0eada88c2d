#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cdr/chain_ladder.hpp"
#include "cdr/tail.hpp"
#include "cdr/triangle.hpp"

namespace cdr {

enum class BootstrapMode { full, estimation_only, process_only };
enum class TailMode { none, normal, lognormal };

std::string_view to_string(BootstrapMode m);
std::string_view to_string(TailMode t);
BootstrapMode parse_bootstrap_mode(std::string_view s);  // full | estimation | process
TailMode parse_tail_mode(std::string_view s);            // none | normal | lognormal

struct Cell {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Centered, bias-adjusted residuals of the individual development factors.
struct ResidualPool {
    std::vector<double> residuals;
    std::vector<Cell> cells;     ///< source cell of each residual
    std::vector<Cell> excluded;  ///< cells with i+j <= I-1 left out of the pool
    double raw_mean = 0.0;       ///< mean before centering
};

/// r_ij = sqrt(C_ij)(f_ij - f_j)/sigma_j scaled by sqrt((I-j)/(I-j-1)), then centered.
/// Column I-1 is excluded (the adjustment is undefined there). Columns with
/// sigma_j = 0 contribute zeros.
ResidualPool build_residual_pool(const CumulativeTriangle& tri, const DevelopmentPattern& pattern);

struct BootstrapConfig {
    std::size_t iterations = 100000;
    std::uint64_t seed = 0;
    BootstrapMode mode = BootstrapMode::full;
    TailMode tail = TailMode::none;
    std::size_t i_ult = 0;    ///< required when tail != none
    std::size_t workers = 1;  ///< speed only; results do not depend on it
    bool per_year = false;    ///< also record CDR by origin year

    /// Throws std::invalid_argument on a bad configuration for a triangle with last index I.
    void validate(std::size_t last_index) const;
};

struct CdrSample {
    double paid_next_year = 0.0;  ///< P^b_{I+1}
    double be_next_year = 0.0;    ///< BE^b_{I+1}
    double cdr = 0.0;             ///< BE_I - P - BE^b
};

struct CdrDistribution {
    BootstrapMode mode = BootstrapMode::full;
    TailMode tail = TailMode::none;
    std::uint64_t seed = 0;
    std::size_t years = 0;  ///< I+1
    double be_I = 0.0;
    std::size_t negative_cumulative_count = 0;

    std::vector<CdrSample> samples;  ///< indexed by iteration
    /// Row-major iterations x years when per-year recording was requested, else empty.
    std::vector<double> per_year_cdr;

    bool has_per_year() const { return !per_year_cdr.empty(); }
    double year_cdr(std::size_t b, std::size_t i) const { return per_year_cdr[b * years + i]; }
    std::vector<double> cdr_values() const;
    std::vector<double> year_values(std::size_t i) const;
};

/// Steps 2-3 of an iteration for given residual draws (one per cell with
/// i+j <= I-1, row-major). Returns the pseudo chain-ladder factors f^{b,I}_j,
/// equal to f_j exactly when every draw is 0.
std::vector<double> pseudo_factors(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                                   std::span<const double> residual_draws);

/// One-year recursive bootstrap of the claims development result.
/// `tail` must be present iff cfg.tail != none; its distribution is taken from cfg.tail.
CdrDistribution run_bootstrap(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                              const std::optional<TailModel>& tail, const BootstrapConfig& cfg);

/// Same, with a pre-built residual pool.
CdrDistribution run_bootstrap(const CumulativeTriangle& tri, const DevelopmentPattern& pattern,
                              const ResidualPool& pool, const std::optional<TailModel>& tail,
                              const BootstrapConfig& cfg);

}  // namespace cdr
