#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qlbridge/errors.hpp"
#include "qlbridge/hilbert.hpp"

using namespace qlb;

namespace {

constexpr double kTol = 1e-9;

Vector ket(std::initializer_list<std::complex<double>> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v[i++] = x;
    return v;
}

// The six-element sublattice of C^2 generated by the z and x axes.
std::map<std::string, Projection> qubit_six() {
    double s = 1.0 / std::sqrt(2.0);
    return {
        {"Pz", line_projector(ket({1, 0}))}, {"Pz_perp", line_projector(ket({0, 1}))},
        {"Px", line_projector(ket({s, s}))}, {"Px_perp", line_projector(ket({s, -s}))},
        {"zero", zero_projection(2)},        {"one", identity_projection(2)},
    };
}

Projection random_projection(std::mt19937_64& eng, int dim) {
    auto u01 = [&] { return (eng() >> 11) * 0x1.0p-53; };
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(u01() - 0.5, u01() - 0.5);
    if (v.norm() < 1e-3) v[0] += 1.0;
    return line_projector(v);
}

QuantumState random_state(std::mt19937_64& eng, int dim) {
    auto u01 = [&] { return (eng() >> 11) * 0x1.0p-53; };
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(u01() - 0.5, u01() - 0.5);
    if (v.norm() < 1e-3) v[0] += 1.0;
    return QuantumState::pure(v);
}

} // namespace

TEST_CASE("orthocomplement") {
    CHECK(approx_equal(ortho(zero_projection(2)).m, identity_projection(2).m, kTol));
    Matrix diag10(2, 2);
    diag10 << 1, 0, 0, 0;
    Matrix diag01(2, 2);
    diag01 << 0, 0, 0, 1;
    CHECK(approx_equal(ortho(Projection{diag10}).m, diag01, kTol));

    std::mt19937_64 eng(3);
    for (int i = 0; i < 50; ++i) {
        Projection p = random_projection(eng, 3);
        CHECK(approx_equal(ortho(ortho(p)).m, p.m, kTol));
    }
}

TEST_CASE("meet and join on C^2") {
    double s = 1.0 / std::sqrt(2.0);
    Projection p0 = line_projector(ket({1, 0}));
    Projection pplus = line_projector(ket({s, s}));

    CHECK(approx_equal(meet(p0, identity_projection(2)).m, p0.m, kTol));
    CHECK(approx_equal(join(p0, zero_projection(2)).m, p0.m, kTol));

    // Distinct lines intersect in the zero subspace and span the plane.
    CHECK(approx_equal(meet(p0, pplus).m, zero_projection(2).m, kTol));
    CHECK(approx_equal(join(p0, pplus).m, identity_projection(2).m, kTol));

    std::mt19937_64 eng(17);
    for (int i = 0; i < 50; ++i) {
        Projection p = random_projection(eng, 2);
        CHECK(approx_equal(join(p, ortho(p)).m, identity_projection(2).m, kTol));
        // De Morgan on random pairs.
        Projection q = random_projection(eng, 2);
        CHECK(approx_equal(ortho(meet(p, q)).m, join(ortho(p), ortho(q)).m, 1e-8));
    }
    CHECK_THROWS_AS(meet(p0, Projection{Matrix::Zero(3, 3)}), InputError);
}

TEST_CASE("meet and join validate as projections") {
    std::mt19937_64 eng(29);
    for (int i = 0; i < 30; ++i) {
        Projection p = random_projection(eng, 4);
        Projection q = random_projection(eng, 4);
        CHECK_NOTHROW(meet(p, q).validate(1e-7));
        CHECK_NOTHROW(join(p, q).validate(1e-7));
    }
}

TEST_CASE("born probabilities") {
    QuantumState z = QuantumState::pure(ket({1, 0}));
    Projection pz = line_projector(ket({1, 0}));
    CHECK(born(z, pz) == doctest::Approx(1.0).epsilon(1e-12));

    // Rotated axis gives cos^2(theta/2); analytic 2x2 trace value.
    for (double theta : {0.0, M_PI / 3, M_PI / 2, 2 * M_PI / 3, M_PI}) {
        Projection p = qubit_axis_projector(theta);
        double expected = std::cos(theta / 2) * std::cos(theta / 2);
        CHECK(born(z, p) == doctest::Approx(expected).epsilon(1e-12));
    }

    std::mt19937_64 eng(31);
    for (int i = 0; i < 50; ++i) {
        QuantumState s = random_state(eng, 3);
        Projection p = random_projection(eng, 3);
        CHECK(born(s, p) + born(s, ortho(p)) == doctest::Approx(1.0).epsilon(1e-9));
        // Additivity on orthogonal projections.
        Projection q = meet(random_projection(eng, 3), ortho(p), kTol);
        if (q.m.trace().real() > 0.5) {
            double lhs = born(s, join(p, q, kTol));
            CHECK(lhs == doctest::Approx(born(s, p) + born(s, q)).epsilon(1e-8));
        }
    }

    CHECK_THROWS_AS(born(z, Projection{Matrix::Identity(3, 3)}), InputError);
    Matrix bad(2, 2);
    bad << 2, 0, 0, -1;
    CHECK_THROWS_AS(born(QuantumState{bad}, pz), InputError);
}

TEST_CASE("six-element qubit lattice: orthomodular, not distributive") {
    ProjectionLattice L = make_projection_lattice(2, kTol, qubit_six());
    CHECK(L.elements.size() == 6);
    LatticeDiagnostics d = lattice_diagnostics(to_ortho_structure(L));
    CHECK(d.bounded_lattice);
    CHECK(d.orthomodular.holds);
    CHECK_FALSE(d.distributive.holds);
    CHECK_FALSE(d.boolean);
    // The witness triple pairs one axis against the two lines of the other.
    CHECK_FALSE(d.distributive.witness.empty());
}

TEST_CASE("distributivity failure verified by direct subspace arithmetic") {
    auto named = qubit_six();
    const Projection &a = named.at("Pz"), &b = named.at("Px"), &c = named.at("Px_perp");
    Matrix lhs = meet(a, join(b, c, kTol), kTol).m;                // a ∧ (b ∨ c) = a
    Matrix rhs = join(meet(a, b, kTol), meet(a, c, kTol), kTol).m; // 0 ∨ 0 = 0
    CHECK(approx_equal(lhs, a.m, kTol));
    CHECK(approx_equal(rhs, zero_projection(2).m, kTol));
    CHECK_FALSE(approx_equal(lhs, rhs, kTol));
}

TEST_CASE("powerset lattice of a 3-element set is Boolean") {
    std::map<std::string, Projection> named;
    for (int mask = 0; mask < 8; ++mask) {
        Matrix m = Matrix::Zero(3, 3);
        for (int b = 0; b < 3; ++b)
            if (mask & (1 << b)) m(b, b) = 1.0;
        named["P" + std::to_string(mask)] = Projection{m};
    }
    ProjectionLattice L = make_projection_lattice(3, kTol, named);
    CHECK(L.elements.size() == 8);
    LatticeDiagnostics d = lattice_diagnostics(to_ortho_structure(L));
    CHECK(d.orthomodular.holds);
    CHECK(d.distributive.holds);
    CHECK(d.boolean);
}

TEST_CASE("benzene-ring ortho-poset fails orthomodularity") {
    // 0 < x < y < 1 and 0 < yp < xp < 1, with p the ortho map.
    OrthoStructure s;
    s.labels = {"0", "x", "y", "yp", "xp", "1"};
    auto idx = [&](const std::string& l) {
        return static_cast<std::size_t>(std::find(s.labels.begin(), s.labels.end(), l) -
                                        s.labels.begin());
    };
    const std::size_t n = 6;
    s.leq.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        s.leq[i][i] = true;
        s.leq[idx("0")][i] = true;
        s.leq[i][idx("1")] = true;
    }
    s.leq[idx("x")][idx("y")] = true;
    s.leq[idx("yp")][idx("xp")] = true;
    s.ortho = {static_cast<int>(idx("1")), static_cast<int>(idx("xp")),
               static_cast<int>(idx("yp")), static_cast<int>(idx("y")),
               static_cast<int>(idx("x")),  static_cast<int>(idx("0"))};

    CHECK(weak_ortho_violations(s).empty());
    LatticeDiagnostics d = lattice_diagnostics(s);
    CHECK(d.bounded_lattice);
    CHECK_FALSE(d.orthomodular.holds); // x ≤ y but x ∨ (xp ∧ y) = x ∨ 0 = x ≠ y
    CHECK(d.orthomodular.witness.find("x") != std::string::npos);
}

TEST_CASE("lattice closure from generators") {
    double s = 1.0 / std::sqrt(2.0);
    std::map<std::string, Projection> gens = {{"Pz", line_projector(ket({1, 0}))},
                                              {"Px", line_projector(ket({s, s}))}};
    ProjectionLattice L = close_projection_lattice(2, kTol, gens);
    CHECK(L.elements.size() == 6);
    ProjectionLattice six = make_projection_lattice(2, kTol, qubit_six());
    IsoResult iso = order_isomorphic(to_ortho_structure(L), to_ortho_structure(six));
    CHECK(iso.mapping.has_value());
}

TEST_CASE("order isomorphism: identity, refutations") {
    ProjectionLattice six = make_projection_lattice(2, kTol, qubit_six());
    OrthoStructure s6 = to_ortho_structure(six);
    IsoResult self = order_isomorphic(s6, s6);
    REQUIRE(self.mapping.has_value());

    std::map<std::string, Projection> boolean8;
    for (int mask = 0; mask < 8; ++mask) {
        Matrix m = Matrix::Zero(3, 3);
        for (int b = 0; b < 3; ++b)
            if (mask & (1 << b)) m(b, b) = 1.0;
        boolean8["P" + std::to_string(mask)] = Projection{m};
    }
    OrthoStructure s8 = to_ortho_structure(make_projection_lattice(3, kTol, boolean8));
    IsoResult no = order_isomorphic(s8, s6);
    CHECK_FALSE(no.mapping.has_value());
    CHECK(no.refutation.find("class counts differ") != std::string::npos);
    CHECK(no.classes_a == 8);
    CHECK(no.classes_b == 6);

    // Same cardinality, different shape: a 6-chain refutes on signatures.
    OrthoStructure chain;
    chain.labels = {"a0", "a1", "a2", "a3", "a4", "a5"};
    chain.leq.assign(6, std::vector<bool>(6, false));
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) chain.leq[i][j] = true;
    chain.ortho = {5, 4, 3, 2, 1, 0};
    IsoResult no2 = order_isomorphic(chain, s6);
    CHECK_FALSE(no2.mapping.has_value());
}

TEST_CASE("isomorphism mappings preserve order both ways") {
    std::mt19937_64 eng(57);
    for (int trial = 0; trial < 10; ++trial) {
        Projection p = random_projection(eng, 2);
        Projection q = random_projection(eng, 2);
        ProjectionLattice A = close_projection_lattice(2, 1e-8, {{"a", p}, {"b", q}});
        OrthoStructure sa = to_ortho_structure(A);
        IsoResult ab = order_isomorphic(sa, sa);
        REQUIRE(ab.mapping.has_value());
        const auto& f = *ab.mapping;
        QuotientResult qa = quotient(sa);
        for (std::size_t i = 0; i < qa.structure.size(); ++i)
            for (std::size_t j = 0; j < qa.structure.size(); ++j)
                CHECK(qa.structure.leq[i][j] == qa.structure.leq[f[i]][f[j]]);
    }
}

TEST_CASE("classical export mirrors the lattice order") {
    ProjectionLattice six = make_projection_lattice(2, kTol, qubit_six());
    double s = 1.0 / std::sqrt(2.0);
    std::map<std::string, QuantumState> states = {
        {"z_plus", QuantumState::pure(ket({1, 0}))},
        {"z_minus", QuantumState::pure(ket({0, 1}))},
        {"x_plus", QuantumState::pure(ket({s, s}))},
        {"x_minus", QuantumState::pure(ket({s, -s}))},
    };
    ClassicalExport ex = export_classical_model(six, states);
    ConcreteLogic logic = concrete_logic(ex.model, ex.phi_v, ex.ortho);
    CHECK(logic.violations.empty());
    LatticeDiagnostics d = lattice_diagnostics(logic.structure);
    CHECK(d.orthomodular.holds);
    CHECK_FALSE(d.distributive.holds);
    IsoResult iso = order_isomorphic(logic.structure, to_ortho_structure(six));
    CHECK(iso.mapping.has_value());
}
