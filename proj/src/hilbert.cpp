#include "qlbridge/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "qlbridge/errors.hpp"

namespace qlb {

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs(a - b) <= tol;
}

void Projection::validate(double tol) const {
    if (m.rows() != m.cols()) throw InputError("projection matrix is not square");
    if (max_abs(m - m.adjoint()) > tol) throw InputError("projection is not Hermitian within tolerance");
    if (max_abs(m * m - m) > tol) throw InputError("projection is not idempotent within tolerance");
}

void QuantumState::validate(double tol) const {
    if (density.rows() != density.cols()) throw InputError("density matrix is not square");
    if (max_abs(density - density.adjoint()) > tol)
        throw InputError("density matrix is not Hermitian within tolerance");
    if (std::abs(density.trace().real() - 1.0) > tol || std::abs(density.trace().imag()) > tol)
        throw InputError("density matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> es(density);
    if (es.eigenvalues().minCoeff() < -tol)
        throw InputError("density matrix is not positive semidefinite");
}

QuantumState QuantumState::pure(const Vector& v) {
    double n = v.norm();
    if (n == 0.0) throw InputError("cannot form a state from the zero vector");
    Vector u = v / n;
    return {u * u.adjoint()};
}

Projection zero_projection(int dim) { return {Matrix::Zero(dim, dim)}; }
Projection identity_projection(int dim) { return {Matrix::Identity(dim, dim)}; }

Projection line_projector(const Vector& v) {
    double n = v.norm();
    if (n == 0.0) throw InputError("cannot project onto the zero vector");
    Vector u = v / n;
    return {u * u.adjoint()};
}

Projection qubit_axis_projector(double theta) {
    Vector v(2);
    v << std::cos(theta / 2.0), std::sin(theta / 2.0);
    return line_projector(v);
}

Projection ortho(const Projection& p) {
    return {Matrix::Identity(p.m.rows(), p.m.cols()) - p.m};
}

Projection meet(const Projection& p, const Projection& q, double tol) {
    if (p.m.rows() != q.m.rows()) throw InputError("meet of projections with different dimensions");
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.m + q.m);
    const int n = static_cast<int>(p.m.rows());
    Matrix acc = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        // Eigenvalue 2 of P + Q picks out range(P) ∩ range(Q).
        if (es.eigenvalues()[i] >= 2.0 - tol) {
            Vector v = es.eigenvectors().col(i);
            acc += v * v.adjoint();
        }
    }
    return {acc};
}

Projection join(const Projection& p, const Projection& q, double tol) {
    return ortho(meet(ortho(p), ortho(q), tol));
}

bool projection_leq(const Projection& p, const Projection& q, double tol) {
    return max_abs(q.m * p.m - p.m) <= tol;
}

double born(const QuantumState& s, const Projection& p, double tol) {
    if (s.dim() != p.dim()) throw InputError("state and projection have different dimensions");
    s.validate(tol);
    p.validate(tol);
    double value = (s.density * p.m).trace().real();
    if (value < -tol || value > 1.0 + tol)
        throw InputError("Born probability outside [0,1] beyond tolerance");
    return std::clamp(value, 0.0, 1.0);
}

int ProjectionLattice::index_of(const Matrix& m) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (approx_equal(elements[i].m, m, tol)) return static_cast<int>(i);
    return -1;
}

int ProjectionLattice::index_of_name(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

const Projection& ProjectionLattice::at(const std::string& name) const {
    int i = index_of_name(name);
    if (i < 0) throw InputError("lattice has no element named '" + name + "'");
    return elements[i];
}

namespace {

void push_if_new(ProjectionLattice& L, const std::string& name, const Projection& p) {
    if (L.index_of(p.m) < 0) {
        L.names.push_back(name);
        L.elements.push_back(p);
    }
}

} // namespace

ProjectionLattice make_projection_lattice(int dim, double tol,
                                          std::map<std::string, Projection> named) {
    ProjectionLattice L{dim, tol, {}, {}};
    for (auto& [name, p] : named) {
        if (p.dim() != dim) throw InputError("element '" + name + "' has the wrong dimension");
        p.validate(tol);
        push_if_new(L, name, p);
    }
    push_if_new(L, "bottom", zero_projection(dim));
    push_if_new(L, "top", identity_projection(dim));
    const std::size_t base = L.elements.size();
    for (std::size_t i = 0; i < base; ++i)
        push_if_new(L, L.names[i] + "_perp", ortho(L.elements[i]));
    return L;
}

ProjectionLattice close_projection_lattice(int dim, double tol,
                                           const std::map<std::string, Projection>& generators,
                                           std::size_t max_elements) {
    ProjectionLattice L = make_projection_lattice(dim, tol, generators);
    bool grew = true;
    while (grew) {
        grew = false;
        const std::size_t n = L.elements.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (const Projection& candidate :
                     {meet(L.elements[i], L.elements[j], tol),
                      join(L.elements[i], L.elements[j], tol)}) {
                    if (L.index_of(candidate.m) < 0) {
                        std::string name = "e" + std::to_string(L.elements.size());
                        L.names.push_back(name);
                        L.elements.push_back(candidate);
                        push_if_new(L, name + "_perp", ortho(candidate));
                        grew = true;
                        if (L.elements.size() > max_elements)
                            throw BudgetExhausted("projection lattice closure exceeded " +
                                                  std::to_string(max_elements) + " elements");
                    }
                }
            }
        }
    }
    return L;
}

OrthoStructure to_ortho_structure(const ProjectionLattice& L) {
    OrthoStructure s;
    const std::size_t n = L.elements.size();
    s.labels = L.names;
    s.leq.assign(n, std::vector<bool>(n, false));
    s.ortho.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            s.leq[i][j] = projection_leq(L.elements[i], L.elements[j], L.tol);
        int o = L.index_of(ortho(L.elements[i]).m);
        if (o < 0)
            throw InputError("lattice is not closed under orthocomplement at '" + L.names[i] + "'");
        s.ortho[i] = o;
    }
    return s;
}

ClassicalExport export_classical_model(const ProjectionLattice& L,
                                       const std::map<std::string, QuantumState>& states) {
    if (states.empty()) throw InputError("classical export needs at least one state");
    ClassicalExport out;

    Signature sig;
    std::vector<std::string> universe;
    for (const auto& [name, s] : states) {
        if (s.dim() != L.dim) throw InputError("state '" + name + "' has the wrong dimension");
        sig.states.push_back(name);
        universe.push_back("obj_" + name);
    }
    for (const auto& name : L.names) {
        sig.properties.push_back(name);
        sig.procedures[name] = {"M0"};
    }

    std::map<std::string, std::vector<std::string>> extensions;
    {
        std::size_t i = 0;
        for (const auto& [name, _] : states) extensions[name] = {universe[i++]};
    }
    for (std::size_t e = 0; e < L.elements.size(); ++e) {
        std::vector<std::string> ext;
        std::size_t i = 0;
        for (const auto& [_, s] : states) {
            if (born(s, L.elements[e], L.tol) >= 1.0 - L.tol) ext.push_back(universe[i]);
            ++i;
        }
        extensions[L.names[e]] = std::move(ext);
    }

    out.model = ClassicalModel::make(std::move(sig), std::move(universe), std::move(extensions));

    OrthoStructure order = to_ortho_structure(L);
    for (std::size_t e = 0; e < L.elements.size(); ++e) {
        WffPtr w = Wff::property(L.names[e]);
        out.ortho[print(*w)] = L.names[order.ortho[e]] + "(x)";
        out.phi_v.push_back(std::move(w));
    }
    return out;
}

} // namespace qlb
