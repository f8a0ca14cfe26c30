#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abel/model.hpp"

namespace abel {

struct InvariantValue {
    std::string name;
    int order;     // jet order consumed
    double value;  // meaningless when !defined
    bool defined;
};

struct Rational {
    int num;
    int den;
    double to_double() const { return static_cast<double>(num) / den; }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// One relative invariant: a polynomial in the coefficient jets whose zero
/// set is preserved by the pseudogroup.  The weight exponents record the
/// multiplier g(x0)^wg * f'(x0)^wf picked up under a transformation; they are
/// cross-checked empirically by weight_fit.
struct RelativeInvariantDef {
    const char* name;
    int jet_order;
    int degree;
    Rational weight_g;
    Rational weight_fp;
    Jet (*eval)(const JetMap&);
};

/// One absolute invariant; eval soft-fails (nullopt) when a regularity
/// denominator is below the scaled vanishing tolerance.
struct AbsoluteInvariantDef {
    const char* name;
    int jet_order;
    std::optional<Jet> (*eval)(const JetMap&, double zero_tol);
};

std::span<const RelativeInvariantDef> relative_catalog(FamilyTag family);
std::span<const AbsoluteInvariantDef> absolute_catalog(FamilyTag family);

Jet relative_invariant_jet(FamilyTag family, std::string_view name, const JetMap& jets);
int relative_invariant_degree(FamilyTag family, std::string_view name);
std::optional<Jet> absolute_invariant_jet(FamilyTag family, std::string_view name, const JetMap& jets,
                                          double zero_tol = kDefaultZeroTol);

std::vector<InvariantValue> relative_invariants(FamilyTag family, const JetMap& jets);
std::vector<InvariantValue> absolute_invariants(FamilyTag family, const JetMap& jets,
                                                double zero_tol = kDefaultZeroTol);

/// s_{2n+1} of the cubic chain (n = 1 gives s3).
Jet cubic_chain(const JetMap& jets, int n);

/// True when every regularity denominator of the family is scaled-nonzero.
bool regularity_ok(FamilyTag family, const JetMap& jets, double zero_tol = kDefaultZeroTol);

/// The A of the invariant derivation nabla = A * D/Dx, as a jet.
std::optional<Jet> derivation_coefficient_jet(FamilyTag family, const JetMap& jets,
                                              double zero_tol = kDefaultZeroTol);
InvariantValue derivation_coefficient(FamilyTag family, const JetMap& jets,
                                      double zero_tol = kDefaultZeroTol);

/// nabla^k applied to the named absolute invariant, evaluated at the jets'
/// base point.  All ingredients are carried as jets; D/Dx is the coefficient
/// shift, never a resampling.
InvariantValue nabla_power(FamilyTag family, const JetMap& jets, std::string_view name, int k,
                           double zero_tol = kDefaultZeroTol);
InvariantValue nabla_power(const AbelEquation& eq, double x0, std::string_view name, int k,
                           int order = kDefaultOrder, double zero_tol = kDefaultZeroTol);
/// The jet of nabla^k J (or nullopt on regularity loss).
std::optional<Jet> nabla_power_jet(FamilyTag family, const JetMap& jets, std::string_view name,
                                   int k, double zero_tol = kDefaultZeroTol);

std::string nabla_label(std::string_view name, int k);

/// Tresse derivative DF/DJ = (DF/Dx)/(DJ/Dx) of two absolute invariants.
InvariantValue tresse_derivative(const AbelEquation& eq, double x0, std::string_view f_name,
                                 std::string_view j_name, int order = kDefaultOrder,
                                 double zero_tol = kDefaultZeroTol);

struct WeightFit {
    Rational g_exponent;
    Rational fp_exponent;
    double g_raw;
    double fp_raw;
    double residual;  // max |log-multiplier misfit| over the trials
    int samples;
};

/// Fits log|F(T.E)/F(E)| against log g(x0), log f'(x0) over random
/// (equation, transformation, point) triples with the h-component included.
WeightFit weight_fit(FamilyTag family, std::string_view name, int trials, std::uint64_t seed,
                     double fail_threshold = 1e-4);

/// Canonical-shape test: leading coefficient identically 1 and the family's
/// zero pattern, as whole jets within the scaled tolerance.
bool canonical_check(FamilyTag family, const JetMap& jets, double tol = kDefaultZeroTol);
bool canonical_check(const AbelEquation& eq, double x0, double tol = kDefaultZeroTol);

}  // namespace abel
