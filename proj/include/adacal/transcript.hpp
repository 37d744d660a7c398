#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "adacal/distribution.hpp"

namespace adacal {

/// One round of the protocol: environment mean (NaN when unknown), binary
/// outcome, the forecaster's prediction law, and the realized prediction.
struct RoundRecord {
    double q = std::numeric_limits<double>::quiet_NaN();
    int y = 0;
    PredictionDistribution dist;
    double p = 0.0;
    /// Diagnostic: the law before it was pushed onto grid points, when the
    /// forecaster samples in a continuous space first.
    std::optional<PredictionDistribution> raw;

    bool has_mean() const noexcept { return q == q; }
};

struct Transcript {
    std::vector<RoundRecord> rounds;

    std::size_t horizon() const noexcept { return rounds.size(); }
    std::span<const RoundRecord> view() const noexcept { return rounds; }
    /// Environment means; empty if any round lacks one.
    std::vector<double> means() const;
};

/// One round per line: "t q y p k a_1 w_1 ... a_k w_k", t starting at 1,
/// q written as "nan" when unknown.
void write_transcript(std::ostream& os, const Transcript& transcript);
Transcript read_transcript(std::istream& is);

}  // namespace adacal
