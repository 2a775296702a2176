#include "mifpo/random.hpp"

#include <algorithm>

namespace mifpo {

MifpoInstance random_instance(Rng& rng, std::size_t l0, std::size_t l1, int k,
                              ObjectiveKind objective) {
    MifpoInstance inst;
    inst.alpha0 = rng.uniform(0.1, 0.9);
    inst.k = k;
    inst.objective = objective;
    inst.rho0.resize(l0);
    inst.rho1.resize(l1);
    for (auto& p : inst.rho0) p = rng.uniform();
    for (auto& p : inst.rho1) p = rng.uniform();
    inst.beta0 = rng.simplex(l0);
    inst.beta1 = rng.simplex(l1);
    validate_instance(inst);
    return inst;
}

MifpoInstance random_oracle_instance(Rng& rng) {
    // All (l0, l1, k) with sides <= 2, k <= 2 whose polytope fits the
    // default enumeration budget.
    static constexpr int shapes[][3] = {{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1},
                                        {1, 2, 2}, {2, 1, 2}, {2, 2, 1}};
    const auto& s = shapes[rng.uniform_int(0, 6)];
    const ObjectiveKind obj =
        rng.uniform() < 0.5 ? ObjectiveKind::MinError : ObjectiveKind::Entropy;
    return random_instance(rng, static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1]),
                           s[2], obj);
}

RepresentationVars random_feasible_vars(const MifpoInstance& inst, Rng& rng) {
    RepresentationVars vars;
    vars.l0 = inst.l0();
    vars.l1 = inst.l1();
    vars.k = inst.k;
    vars.r0.resize(vars.atom_count());
    vars.r1.resize(vars.atom_count());
    const std::size_t row0 = inst.l1() * static_cast<std::size_t>(inst.k);
    for (std::size_t u = 0; u < inst.l0(); ++u) {
        const std::vector<double> row = rng.simplex(row0);
        std::copy(row.begin(), row.end(), vars.r0.begin() + static_cast<long>(u * row0));
    }
    for (std::size_t v = 0; v < inst.l1(); ++v) {
        const std::vector<double> row = rng.simplex(inst.l0() * static_cast<std::size_t>(inst.k));
        std::size_t t = 0;
        for (std::size_t u = 0; u < inst.l0(); ++u)
            for (int j = 0; j < inst.k; ++j) vars.r1[vars.idx(u, v, j)] = row[t++];
    }
    return vars;
}

FiniteRepresentation random_representation(Rng& rng, std::size_t s0, std::size_t s1,
                                           std::size_t atoms) {
    FiniteRepresentation rep;
    rep.alpha0 = rng.uniform(0.1, 0.9);
    rep.s0_weights = rng.simplex(s0);
    rep.s1_weights = rng.simplex(s1);
    rep.rho_s0.resize(s0);
    rep.rho_s1.resize(s1);
    for (auto& p : rep.rho_s0) p = rng.uniform();
    for (auto& p : rep.rho_s1) p = rng.uniform();
    rep.t0.resize(static_cast<long>(s0), static_cast<long>(atoms));
    rep.t1.resize(static_cast<long>(s1), static_cast<long>(atoms));
    for (long r = 0; r < rep.t0.rows(); ++r) {
        const std::vector<double> row = rng.simplex(atoms);
        for (long c = 0; c < rep.t0.cols(); ++c) rep.t0(r, c) = row[static_cast<std::size_t>(c)];
    }
    for (long r = 0; r < rep.t1.rows(); ++r) {
        const std::vector<double> row = rng.simplex(atoms);
        for (long c = 0; c < rep.t1.cols(); ++c) rep.t1(r, c) = row[static_cast<std::size_t>(c)];
    }
    validate_rep(rep);
    return rep;
}

FiniteRepresentation random_representation_with_collisions(Rng& rng, std::size_t s0,
                                                           std::size_t s1, std::size_t atoms) {
    FiniteRepresentation rep = random_representation(rng, s0, s1, atoms);
    // Copy some posteriors so each side has at least one mergeable pair.
    if (s0 >= 2)
        for (std::size_t i = 1; i < s0; i += 2) rep.rho_s0[i] = rep.rho_s0[i - 1];
    if (s1 >= 2)
        for (std::size_t i = 1; i < s1; i += 2) rep.rho_s1[i] = rep.rho_s1[i - 1];
    return rep;
}

TwoPointRep random_two_point(Rng& rng, std::size_t atoms) {
    TwoPointRep rep;
    rep.rho_u = rng.uniform();
    rep.rho_v = rng.uniform();
    rep.w0.resize(atoms);
    rep.w1.resize(atoms);
    const double scale0 = rng.uniform(0.05, 0.5);
    const double scale1 = rng.uniform(0.05, 0.5);
    for (auto& w : rep.w0) w = scale0 * rng.uniform();
    for (auto& w : rep.w1) w = scale1 * rng.uniform();
    // A couple of one-sided atoms exercise the p = 0 / p = 1 grid ends.
    if (atoms >= 2) {
        rep.w0[0] = 0.0;
        rep.w1[atoms - 1] = 0.0;
    }
    return rep;
}

}  // namespace mifpo
