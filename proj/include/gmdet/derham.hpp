#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmdet/connection.hpp"

namespace gmdet {

/// mu(z) dz with mu = 1/(z - x)^power (finite point) or z^power (point = -1).
struct DzMonomial {
    int point = -1;  // index into the finite points of D, -1 for the polynomial part
    int power = 0;

    bool operator==(const DzMonomial& o) const { return point == o.point && power == o.power; }
};

/// A basis element e_j (x) mu dz.
struct BasisElement {
    DzMonomial mono;
    std::size_t j = 0;
};

/// H^1 of an admissible spec as the cokernel of nabla on global sections of
/// E (x) omega(D). Coordinates live in the monomial space W (one block of r
/// coordinates per monomial); the relations nabla(e_j) are used to eliminate
/// one monomial block.
class DeRhamPresentation {
public:
    /// Builds the presentation. `eliminate` overrides the default choice of
    /// eliminated monomial (the first invertible block nearest infinity).
    explicit DeRhamPresentation(ConnectionSpec spec, std::optional<DzMonomial> eliminate = std::nullopt);

    const ConnectionSpec& spec() const { return spec_; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }
    const std::vector<DzMonomial>& monomials() const { return monos_; }
    const DzMonomial& eliminated() const { return monos_[elim_]; }

    /// The function mu(z) of a monomial (with the residue correction when
    /// infinity is not in D).
    RF monomial_function(const DzMonomial& m) const;
    /// Vector-valued function of a basis element.
    std::vector<RF> basis_function(std::size_t k) const;
    std::string basis_string(std::size_t k) const;

    /// Coordinates of v dz in the basis. v has poles only on supp D.
    std::vector<RF> reduce(const std::vector<RF>& v) const;

    /// Coordinates in W of v dz, which must be a section of E (x) omega(D).
    std::vector<RF> monomial_coordinates(const std::vector<RF>& v) const;

private:
    friend std::size_t h0_flat_sections(const ConnectionSpec& spec);
    DeRhamPresentation(ConnectionSpec spec, std::optional<DzMonomial> eliminate, bool build_basis);

    std::vector<RF> kill_excess_poles(std::vector<RF> v) const;
    std::vector<RF> project(const std::vector<RF>& w) const;

    ConnectionSpec spec_;
    std::vector<DivisorPoint> finite_;
    int m_inf_ = 0;
    std::vector<DzMonomial> monos_;
    int dropped_ = -1;  // monomial fixed by the residue constraint when m_inf = 0
    std::size_t elim_ = 0;
    RMatrix relations_;      // (|W| r) x r, column j = coordinates of nabla(e_j)
    RMatrix elim_inverse_;   // inverse of the eliminated r x r block
    std::vector<BasisElement> basis_;
};

/// Dimension of the flat constant sections (kernel of F on K^r).
std::size_t h0_flat_sections(const ConnectionSpec& spec);

/// Checks admissibility and vanishing of H^0; throws precondition otherwise.
DeRhamPresentation h1_basis(const ConnectionSpec& spec, std::optional<DzMonomial> eliminate = std::nullopt);

/// GM matrix: column k holds the coordinates of
/// sum_i reduce((C_i v_k + d v_k / d tau_i) dz) dtau_i, returned as a form
/// with zero fiber part. Columns are computed in parallel.
AbsoluteForm1 gauss_manin_matrix(const DeRhamPresentation& pres);
/// Single-threaded reference implementation.
AbsoluteForm1 gauss_manin_matrix_serial(const DeRhamPresentation& pres);

/// Trace of the GM matrix: the determinant of the connection on H^1.
BaseForm h1_trace(const DeRhamPresentation& pres);
/// Class of det H^1 (trace of the GM matrix).
BaseFormClass h1_determinant(const DeRhamPresentation& pres);
/// Class of det H^* = (det H^1)^{-1}, i.e. minus the trace of the GM matrix.
BaseFormClass gm_determinant(const DeRhamPresentation& pres);

}  // namespace gmdet
