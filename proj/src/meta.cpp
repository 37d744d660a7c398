#include "adacal/meta.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace adacal {

double Certificate::operator()(std::size_t rounds, double guess) const noexcept {
    const double n = static_cast<double>(rounds);
    switch (family) {
        case CertificateFamily::cal1: return alpha1 * std::sqrt(n) + alpha2 * std::cbrt(guess * n);
        case CertificateFamily::cal2: return alpha1 + alpha2 * std::cbrt(guess);
        case CertificateFamily::pkl: return h + alpha1 + alpha2 * std::cbrt(guess);
    }
    return 0.0;
}

Certificate Certificate::defaults(CertificateFamily family, std::size_t horizon, double iota,
                                  double multiplier) {
    const double lt = std::log(static_cast<double>(std::max<std::size_t>(horizon, 2)));
    Certificate c;
    c.family = family;
    if (family == CertificateFamily::cal1) {
        c.alpha1 = multiplier * std::sqrt(iota) * lt;
        c.alpha2 = multiplier * std::cbrt(iota) * lt;
        return c;
    }
    c.alpha1 = multiplier * iota * lt * lt;
    c.alpha2 = multiplier * std::pow(iota, 2.0 / 3.0) * lt * lt;
    if (family == CertificateFamily::pkl)
        c.h = multiplier * std::log(static_cast<double>(horizon) + 1.0);
    return c;
}

std::size_t guess_levels(std::size_t horizon) {
    // Smallest b with 8^b >= 8 + T, in integers.
    const std::size_t target = 8 + horizon;
    std::size_t b = 0;
    std::size_t power = 1;
    while (power < target) {
        power *= 8;
        ++b;
    }
    return b;
}

double meta_confidence(double delta, std::size_t horizon) {
    const double t = static_cast<double>(horizon);
    return delta / (10.0 * t * t * static_cast<double>(guess_levels(horizon)));
}

std::size_t g_b(std::size_t b, const Certificate& certificate, std::size_t horizon) {
    if (b == 0) throw std::invalid_argument("g_b: blocks are numbered from 1");
    const double guess = std::ldexp(1.0, static_cast<int>(3 * b));
    const double ratio = certificate(horizon, guess) / certificate(horizon, 0.0);
    const double g = certificate.family == CertificateFamily::cal1 ? ratio * ratio : ratio;
    // Guard against the ratio landing a hair above an integer.
    return static_cast<std::size_t>(std::ceil(g - 1e-12));
}

std::size_t MetaLog::early_terminated_tests() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        sub_blocks.begin(), sub_blocks.end(),
        [](const SubBlock& s) { return s.is_test && s.terminated_early; }));
}

std::size_t MetaLog::blocks() const noexcept {
    return sub_blocks.empty() ? 0 : sub_blocks.back().block;
}

void write_meta_log(std::ostream& os, const MetaLog& log) {
    const auto old_precision = os.precision(17);
    os << "b,l,guess,start,end,err,terminated_early\n";
    for (const SubBlock& s : log.sub_blocks)
        os << s.block << ',' << s.index << ',' << s.guess << ',' << s.start << ',' << s.end << ','
           << s.err << ',' << (s.terminated_early ? 1 : 0) << '\n';
    os.precision(old_precision);
}

MetaResult run_meta(const BaseFactory& factory, MetricKind err_kind,
                    const Certificate& certificate, double delta,
                    std::span<const double> means, std::span<const int> outcomes,
                    CounterRng rng) {
    const std::size_t T = outcomes.size();
    if (!means.empty() && means.size() != T)
        throw std::invalid_argument("run_meta: means and outcomes misaligned");
    const double confidence = meta_confidence(delta, T);
    const std::size_t max_level = guess_levels(T);

    MetaResult out;
    out.transcript.rounds.reserve(T);
    RunningMetric err(err_kind);
    std::size_t t = 0;
    for (std::size_t b = 1; t < T; ++b) {
        const std::size_t level = std::min(b, max_level);
        const double block_guess = std::ldexp(1.0, static_cast<int>(3 * level));
        const std::size_t tests = g_b(level, certificate, T);
        for (std::size_t l = 1; l <= tests + 1 && t < T; ++l) {
            const bool is_test = l <= tests;
            const double guess = is_test ? 0.0 : block_guess;
            auto base = factory(confidence, guess, CounterRng(rng.next(), t));
            err.reset();
            SubBlock sub{b, l, guess, t + 1, t, 0.0, false, is_test};
            double threshold = 0.0;
            while (err.value() <= threshold && t < T) {
                RoundRecord rec;
                RoundPrediction pred = base->predict();
                rec.q = means.empty() ? rec.q : means[t];
                rec.y = outcomes[t];
                rec.dist = std::move(pred.dist);
                rec.p = pred.p;
                rec.raw = std::move(pred.raw);
                base->observe(rec.y);
                err.add(rec);
                out.transcript.rounds.push_back(std::move(rec));
                ++t;
                threshold = is_test ? certificate(err.rounds(), 0.0) : certificate(T, guess);
            }
            sub.end = t;
            sub.err = err.value();
            sub.terminated_early = err.value() > threshold;
            out.log.sub_blocks.push_back(sub);
        }
    }
    return out;
}

}  // namespace adacal
