#include "adacal/transcript.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace adacal {

std::vector<double> Transcript::means() const {
    std::vector<double> q;
    q.reserve(rounds.size());
    for (const RoundRecord& r : rounds) {
        if (!r.has_mean()) return {};
        q.push_back(r.q);
    }
    return q;
}

void write_transcript(std::ostream& os, const Transcript& transcript) {
    const auto old_precision = os.precision(17);
    std::size_t t = 1;
    for (const RoundRecord& r : transcript.rounds) {
        os << t++ << ' ';
        if (r.has_mean())
            os << r.q;
        else
            os << "nan";
        os << ' ' << r.y << ' ' << r.p << ' ' << r.dist.size();
        for (const Atom& a : r.dist.atoms()) os << ' ' << a.value << ' ' << a.prob;
        os << '\n';
    }
    os.precision(old_precision);
}

namespace {

double parse_real(const std::string& tok, std::size_t line) {
    if (tok == "nan" || tok == "NaN" || tok == "-") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size())
        throw std::invalid_argument("transcript line " + std::to_string(line) +
                                    ": bad number '" + tok + "'");
    return v;
}

}  // namespace

Transcript read_transcript(std::istream& is) {
    Transcript out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string t_tok, q_tok, y_tok, p_tok, k_tok;
        if (!(ls >> t_tok >> q_tok >> y_tok >> p_tok >> k_tok))
            throw std::invalid_argument("transcript line " + std::to_string(lineno) +
                                        ": expected 't q y p k ...'");
        RoundRecord r;
        r.q = parse_real(q_tok, lineno);
        const double y = parse_real(y_tok, lineno);
        if (y != 0.0 && y != 1.0)
            throw std::invalid_argument("transcript line " + std::to_string(lineno) +
                                        ": outcome must be 0 or 1");
        r.y = static_cast<int>(y);
        r.p = parse_real(p_tok, lineno);
        const double k = parse_real(k_tok, lineno);
        if (!(k >= 1.0) || k != static_cast<double>(static_cast<std::size_t>(k)))
            throw std::invalid_argument("transcript line " + std::to_string(lineno) +
                                        ": atom count must be a positive integer");
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
            std::string a_tok, w_tok;
            if (!(ls >> a_tok >> w_tok))
                throw std::invalid_argument("transcript line " + std::to_string(lineno) +
                                            ": fewer atoms than declared");
            atoms.push_back({parse_real(a_tok, lineno), parse_real(w_tok, lineno)});
        }
        r.dist = PredictionDistribution(std::move(atoms));
        out.rounds.push_back(std::move(r));
    }
    return out;
}

}  // namespace adacal
