#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "adacal/forecasters.hpp"
#include "adacal/metrics.hpp"
#include "adacal/transcript.hpp"

namespace adacal {

enum class CertificateFamily { cal1, cal2, pkl };

/// Error budget U(I, C) promised by a base forecaster on an interval of
/// |I| rounds under non-stationarity guess C:
///   cal1: alpha1 sqrt|I| + alpha2 (C |I|)^{1/3}
///   cal2: alpha1 + alpha2 C^{1/3}
///   pkl:  h + alpha1 + alpha2 C^{1/3}
struct Certificate {
    CertificateFamily family = CertificateFamily::cal1;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double h = 0.0;

    double operator()(std::size_t rounds, double guess) const noexcept;

    /// Defaults scaled by `multiplier`, with iota the confidence factor at
    /// the meta-level confidence:
    ///   cal1: alpha1 = sqrt(iota) ln T,   alpha2 = iota^{1/3} ln T
    ///   cal2: alpha1 = iota ln^2 T,       alpha2 = iota^{2/3} ln^2 T
    ///   pkl:  cal2 alphas plus h = ln(T + 1)
    static Certificate defaults(CertificateFamily family, std::size_t horizon, double iota,
                                double multiplier = 1.0);
};

/// delta' = delta / (10 T^2 ceil(log8(8 + T))).
double meta_confidence(double delta, std::size_t horizon);

/// ceil(log8(8 + T)): the number of distinct non-zero guesses.
std::size_t guess_levels(std::size_t horizon);

/// Test sub-blocks in block b: ceil((U(T, 8^b) / U(T, 0))^2) for cal1,
/// ceil(U(T, 8^b) / U(T, 0)) otherwise.
std::size_t g_b(std::size_t b, const Certificate& certificate, std::size_t horizon);

struct SubBlock {
    std::size_t block = 0;
    std::size_t index = 0;  // 1-based within the block
    double guess = 0.0;
    std::size_t start = 0;  // 1-based first round
    std::size_t end = 0;    // 1-based last round, inclusive
    double err = 0.0;
    bool terminated_early = false;
    bool is_test = true;
};

struct MetaLog {
    std::vector<SubBlock> sub_blocks;

    std::size_t early_terminated_tests() const noexcept;
    std::size_t blocks() const noexcept;
};

/// CSV: b,l,guess,start,end,err,terminated_early.
void write_meta_log(std::ostream& os, const MetaLog& log);

/// Builds a fresh base forecaster for the given confidence and C guess.
using BaseFactory =
    std::function<std::unique_ptr<Forecaster>(double confidence, double guess, CounterRng rng)>;

struct MetaResult {
    Transcript transcript;
    MetaLog log;
};

/// Block / sub-block restarts. Block b runs G_b stationarity tests (guess 0,
/// threshold U(current rounds, 0) refreshed every round) and then one
/// sub-block with guess 8^b (fixed threshold U(T, 8^b)); a sub-block ends
/// on the round its running error exceeds the threshold or at the horizon.
MetaResult run_meta(const BaseFactory& factory, MetricKind err_kind,
                    const Certificate& certificate, double delta,
                    std::span<const double> means, std::span<const int> outcomes,
                    CounterRng rng);

}  // namespace adacal
