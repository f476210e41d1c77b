#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace xiqed {

enum class NonlinearityKind { Constant, Harmonious, TrappedIon };

/// Intensity function f(n) that deforms the atom-field coupling, A = a f(n).
class NonlinearitySpec {
  public:
    static NonlinearitySpec constant();
    static NonlinearitySpec harmonious();
    /// Throws ModelError(InvalidArgument) unless lamb_dicke > 0 and finite.
    static NonlinearitySpec trapped_ion(double lamb_dicke);

    NonlinearityKind kind() const noexcept { return kind_; }
    /// Only present for the trapped-ion kind.
    std::optional<double> lamb_dicke() const noexcept { return lamb_dicke_; }

    std::string name() const;

  private:
    NonlinearitySpec(NonlinearityKind kind, std::optional<double> eta) : kind_(kind), lamb_dicke_(eta) {}

    NonlinearityKind kind_;
    std::optional<double> lamb_dicke_;
};

inline constexpr double kDefaultLambDicke = 0.2;

/// Parses "constant", "harmonious", "trapped-ion" (or "trapped_ion").
std::optional<NonlinearityKind> parse_nonlinearity_kind(std::string_view text);
NonlinearitySpec make_nonlinearity(NonlinearityKind kind, double lamb_dicke = kDefaultLambDicke);

/// Associated Laguerre polynomial L_n^m(x) by upward three-term recurrence.
double laguerre_eval(unsigned n, unsigned m, double x);

/// f(m) for m >= 1. f(0) is never needed by the ladder couplings and is rejected.
double nonlinearity_value(const NonlinearitySpec &spec, unsigned m);

/// Ladder couplings of one excitation block, in units of g.
struct CouplingBlock {
    unsigned n = 0;
    std::array<double, 4> v{}; // v[j-1] = f(n+j) sqrt(n+j)
};

CouplingBlock coupling_strengths(const NonlinearitySpec &spec, unsigned n);

} // namespace xiqed
