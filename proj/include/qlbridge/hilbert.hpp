#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "qlbridge/classical_model.hpp"
#include "qlbridge/ortho_structure.hpp"

namespace qlb {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct HilbertSpace {
    int dim = 2;
    double tol = 1e-9;
};

// Hermitian idempotent matrix; the propositions of the reference quantum
// logic.
struct Projection {
    Matrix m;

    int dim() const { return static_cast<int>(m.rows()); }
    void validate(double tol) const; // Hermitian and idempotent within tol
};

// Density matrix; pure states are rank-1.
struct QuantumState {
    Matrix density;

    int dim() const { return static_cast<int>(density.rows()); }
    void validate(double tol) const; // Hermitian, PSD, unit trace within tol

    static QuantumState pure(const Vector& v); // normalizes v
};

Projection zero_projection(int dim);
Projection identity_projection(int dim);

// Rank-1 projector onto the line spanned by v.
Projection line_projector(const Vector& v);

// Projector onto cos(theta/2)|0> + sin(theta/2)|1> in C^2; theta = 0 is the
// z+ axis, theta = pi/2 the x+ axis.
Projection qubit_axis_projector(double theta);

bool approx_equal(const Matrix& a, const Matrix& b, double tol);

// I - P.
Projection ortho(const Projection& p);

// Projection onto range(P) ∩ range(Q), computed from the eigenspace of
// P + Q at eigenvalue 2 (x is in both ranges iff (P+Q)x = 2x).
Projection meet(const Projection& p, const Projection& q, double tol = 1e-9);

// De Morgan dual of meet.
Projection join(const Projection& p, const Projection& q, double tol = 1e-9);

// P ≤ Q iff QP = P within tol.
bool projection_leq(const Projection& p, const Projection& q, double tol = 1e-9);

// trace(rho P), clamped to [0,1] within tol.
double born(const QuantumState& s, const Projection& p, double tol = 1e-9);

// Finite list of projections with cached order; contains 0 and I and is
// closed under orthocomplement.
struct ProjectionLattice {
    int dim = 0;
    double tol = 1e-9;
    std::vector<std::string> names;
    std::vector<Projection> elements;

    int index_of(const Matrix& m) const; // -1 when absent (within tol)
    int index_of_name(const std::string& name) const;
    const Projection& at(const std::string& name) const;
};

// Assembles a lattice from named elements: validates each projection, adds
// 0/I if missing, closes under orthocomplement, dedups within tol.
ProjectionLattice make_projection_lattice(int dim, double tol,
                                          std::map<std::string, Projection> named);

// Closes `generators` under orthocomplement and meet (join follows by De
// Morgan). Throws BudgetExhausted if more than `max_elements` distinct
// projections appear.
ProjectionLattice close_projection_lattice(int dim, double tol,
                                           const std::map<std::string, Projection>& generators,
                                           std::size_t max_elements = 512);

// Order-theoretic view for diagnostics and isomorphism checks.
OrthoStructure to_ortho_structure(const ProjectionLattice& L);

// Classical-model export: one object per supplied state, the extension of a
// lattice element being the states it holds with certainty on (born = 1).
// The resulting concrete logic mirrors the lattice order.
struct ClassicalExport {
    ClassicalModel model;
    std::vector<WffPtr> phi_v;                 // one property wff per lattice element
    std::map<std::string, std::string> ortho;  // wff text -> wff text
};

ClassicalExport export_classical_model(const ProjectionLattice& L,
                                       const std::map<std::string, QuantumState>& states);

} // namespace qlb
