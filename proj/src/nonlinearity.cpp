#include "xiqed/nonlinearity.hpp"

#include <cmath>
#include <sstream>

#include "xiqed/error.hpp"

namespace xiqed {

namespace {
constexpr double kSingularDenominator = 1e-12;
}

NonlinearitySpec NonlinearitySpec::constant() { return {NonlinearityKind::Constant, std::nullopt}; }

NonlinearitySpec NonlinearitySpec::harmonious() { return {NonlinearityKind::Harmonious, std::nullopt}; }

NonlinearitySpec NonlinearitySpec::trapped_ion(double lamb_dicke) {
    if(!(lamb_dicke > 0.0) || !std::isfinite(lamb_dicke)) {
        std::ostringstream msg;
        msg << "Lamb-Dicke parameter must be positive and finite, got " << lamb_dicke;
        throw ModelError(ErrorKind::InvalidArgument, msg.str());
    }
    return {NonlinearityKind::TrappedIon, lamb_dicke};
}

std::string NonlinearitySpec::name() const {
    switch(kind_) {
        case NonlinearityKind::Constant: return "constant";
        case NonlinearityKind::Harmonious: return "harmonious";
        case NonlinearityKind::TrappedIon: return "trapped-ion";
    }
    return "unknown";
}

std::optional<NonlinearityKind> parse_nonlinearity_kind(std::string_view text) {
    if(text == "constant") return NonlinearityKind::Constant;
    if(text == "harmonious") return NonlinearityKind::Harmonious;
    if(text == "trapped-ion" || text == "trapped_ion") return NonlinearityKind::TrappedIon;
    return std::nullopt;
}

NonlinearitySpec make_nonlinearity(NonlinearityKind kind, double lamb_dicke) {
    switch(kind) {
        case NonlinearityKind::Constant: return NonlinearitySpec::constant();
        case NonlinearityKind::Harmonious: return NonlinearitySpec::harmonious();
        case NonlinearityKind::TrappedIon: return NonlinearitySpec::trapped_ion(lamb_dicke);
    }
    return NonlinearitySpec::constant();
}

double laguerre_eval(unsigned n, unsigned m, double x) {
    double prev = 1.0;
    if(n == 0) return prev;
    double curr = 1.0 + m - x;
    for(unsigned k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + m - x) * curr - (k + m) * prev) / (k + 1.0);
        prev        = curr;
        curr        = next;
    }
    return curr;
}

double nonlinearity_value(const NonlinearitySpec &spec, unsigned m) {
    if(m == 0) throw ModelError(ErrorKind::InvalidArgument, "f(n) is only defined for n >= 1");
    switch(spec.kind()) {
        case NonlinearityKind::Constant: return 1.0;
        case NonlinearityKind::Harmonious: return 1.0 / std::sqrt(static_cast<double>(m));
        case NonlinearityKind::TrappedIon: {
            double eta   = *spec.lamb_dicke();
            double x     = eta * eta;
            double denom = (m + 1.0) * laguerre_eval(m, 0, x);
            if(std::abs(denom) < kSingularDenominator) {
                std::ostringstream msg;
                msg << "(m+1) L_m^0(eta^2) vanishes at m = " << m << ", eta = " << eta;
                throw ModelError(ErrorKind::NonlinearitySingularity, msg.str());
            }
            return laguerre_eval(m, 1, x) / denom;
        }
    }
    return 1.0;
}

CouplingBlock coupling_strengths(const NonlinearitySpec &spec, unsigned n) {
    CouplingBlock block;
    block.n = n;
    for(unsigned j = 1; j <= 4; ++j) {
        if(spec.kind() == NonlinearityKind::Harmonious) {
            block.v[j - 1] = 1.0; // f(m) sqrt(m) == 1 identically
        } else {
            block.v[j - 1] = nonlinearity_value(spec, n + j) * std::sqrt(static_cast<double>(n + j));
        }
    }
    return block;
}

} // namespace xiqed
