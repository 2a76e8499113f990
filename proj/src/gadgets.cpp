#include "qgad/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qgad/errors.hpp"
#include "qgad/linalg.hpp"

namespace qgad {

std::string to_string(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::ThreeLocal: return "three-local";
        case GadgetKind::KLocal: return "k-local";
        case GadgetKind::Recipe: return "recipe";
        case GadgetKind::Measurement: return "measurement";
    }
    return "?";
}

GadgetKind gadget_kind_from_string(const std::string& name) {
    if (name == "three-local") return GadgetKind::ThreeLocal;
    if (name == "k-local") return GadgetKind::KLocal;
    if (name == "recipe") return GadgetKind::Recipe;
    if (name == "measurement") return GadgetKind::Measurement;
    throw ValidationError("unknown gadget kind: " + name);
}

PauliSum GadgetModel::hamiltonian(double lambda) const {
    PauliSum h = h_aux;
    h += lambda * v;
    return h;
}

std::vector<int> GadgetModel::target_qubit_list() const {
    std::vector<int> qs(n_target);
    std::iota(qs.begin(), qs.end(), 0);
    return qs;
}

std::vector<int> GadgetModel::aux_qubit_list() const {
    std::vector<int> qs(total_qubits - n_target);
    std::iota(qs.begin(), qs.end(), static_cast<int>(n_target));
    return qs;
}

namespace {

struct SplitTarget {
    PauliSum body;  // weight >= 1 terms
    double shift;
};

SplitTarget split_identity(const PauliSum& target) {
    SplitTarget out{PauliSum::zero(target.n_qubits()), 0.0};
    std::vector<PauliTerm> body;
    for (const auto& t : target.terms()) {
        if (t.string.is_identity())
            out.shift += t.coefficient;
        else
            body.push_back(t);
    }
    out.body = PauliSum::from_terms(std::move(body), target.n_qubits());
    return out;
}

/// |1><1| on one qubit as 1/2 (I - Z).
PauliSum projector_one(std::uint32_t qubit, std::uint32_t width) {
    return PauliSum::from_terms(
        {{0.5, PauliString()}, {-0.5, PauliString::single(Axis::Z, qubit)}}, width);
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

double lambda_max(const PauliSum& target) {
    const auto [body, shift] = split_identity(target);
    if (body.empty()) throw ValidationError("empty Hamiltonian");
    const int k = body.max_weight();
    const auto r = static_cast<double>(body.size());
    double abs_sum = 0;
    for (const auto& t : body.terms()) abs_sum += std::abs(t.coefficient);
    return 0.25 / (abs_sum + r * (k - 1));
}

namespace {

GadgetModel build_local_gadget(const PauliSum& target, int k_prime, GadgetKind kind) {
    if (target.empty()) throw ValidationError("empty Hamiltonian");
    auto [body, shift] = split_identity(target);

    GadgetModel g;
    g.kind = kind;
    g.target = body;
    g.scalar_shift = shift;
    g.n_target = target.n_qubits();
    g.k_prime = k_prime;
    g.ground_energy_unperturbed = 0.0;

    const int k = body.max_weight();
    if (body.empty()) {
        // Pure scalar target: nothing to gadgetize.
        g.total_qubits = g.n_target;
        g.h_aux = PauliSum::zero(g.total_qubits);
        g.v = PauliSum::zero(g.total_qubits);
        g.order = 0;
        g.lambda_max = std::numeric_limits<double>::infinity();
        return g;
    }
    if (k_prime < 3 || k_prime > k + 2)
        throw ValidationError("k_prime out of range: need 3 <= k' <= k + 2");

    // Register width: k for the three-local construction, ceil(k/(k'-2)) when
    // k'-2 target factors are bundled per coupling. Width 1 degenerates the
    // cycle (X^2 = I) and the couplings pass through onto the target alone.
    const int width = ceil_div(k, k_prime - 2);
    const auto r = static_cast<std::uint32_t>(body.size());
    g.total_qubits = g.n_target + r * static_cast<std::uint32_t>(width);
    g.order = width;

    std::vector<PauliTerm> h_aux_terms;
    std::vector<PauliTerm> v_terms;
    double abs_sum = 0;
    for (std::uint32_t s = 0; s < r; ++s) {
        const PauliTerm& term = body.terms()[s];
        abs_sum += std::abs(term.coefficient);
        const std::uint32_t base = g.n_target + s * static_cast<std::uint32_t>(width);
        std::vector<std::uint32_t> reg(width);
        std::iota(reg.begin(), reg.end(), base);
        g.aux_registers.push_back(reg);

        for (int j = 0; j < width; ++j) {
            PauliSum proj = projector_one(reg[static_cast<std::size_t>(j)], g.total_qubits);
            for (const auto& pt : proj.terms()) h_aux_terms.push_back(pt);
        }

        // Factors in ascending qubit order, identity-padded to length k.
        const auto& sites = term.string.sites();
        for (int j = 1; j <= width; ++j) {
            std::vector<PauliString::Site> bundle;
            for (int l = (j - 1) * (k_prime - 2); l < std::min(j * (k_prime - 2), k); ++l) {
                if (l < static_cast<int>(sites.size())) bundle.push_back(sites[static_cast<std::size_t>(l)]);
            }
            // Cyclic successor: register qubits form the cycle 1 -> ... -> width -> 1.
            const int succ = (j % width) + 1;
            if (width > 1) {
                bundle.emplace_back(reg[static_cast<std::size_t>(j - 1)], Axis::X);
                bundle.emplace_back(reg[static_cast<std::size_t>(succ - 1)], Axis::X);
            }
            const double sign = (width % 2 == 0) ? -1.0 : 1.0;  // -(-1)^width
            const double coeff = (j == 1) ? sign * term.coefficient : 1.0;
            v_terms.push_back({coeff, PauliString::from_sites(std::move(bundle))});
        }
    }
    g.h_aux = PauliSum::from_terms(std::move(h_aux_terms), g.total_qubits);
    g.v = PauliSum::from_terms(std::move(v_terms), g.total_qubits);
    g.lambda_max = 0.25 / (abs_sum + static_cast<double>(r) * (width - 1));
    return g;
}

}  // namespace

GadgetModel build_three_local(const PauliSum& target) {
    return build_local_gadget(target, 3, GadgetKind::ThreeLocal);
}

GadgetModel build_k_local(const PauliSum& target, int k_prime) {
    GadgetModel g = build_local_gadget(target, k_prime, GadgetKind::KLocal);
    return g;
}

RecipeSpec def1_recipe(int k) {
    if (k < 2) throw ValidationError("recipe width must be at least 2");
    RecipeSpec spec;
    spec.register_width = k;
    std::vector<PauliTerm> pen;
    for (int i = 0; i < k; ++i) {
        pen.push_back({0.5, PauliString()});
        pen.push_back({-0.5, PauliString::single(Axis::Z, static_cast<std::uint32_t>(i))});
    }
    spec.penalization = PauliSum::from_terms(std::move(pen), static_cast<std::uint32_t>(k));
    for (int j = 1; j <= k; ++j) {
        spec.factors.push_back(PauliString::from_sites(
            {{static_cast<std::uint32_t>(j - 1), Axis::X},
             {static_cast<std::uint32_t>(j % k), Axis::X}}));
    }
    return spec;
}

RecipeSpec jordan_farhi_recipe(int k) {
    if (k < 2) throw ValidationError("recipe width must be at least 2");
    RecipeSpec spec;
    spec.register_width = k;
    std::vector<PauliTerm> pen;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            pen.push_back({0.5, PauliString()});
            pen.push_back({-0.5, PauliString::from_sites({{static_cast<std::uint32_t>(i), Axis::Z},
                                                          {static_cast<std::uint32_t>(j), Axis::Z}})});
        }
    }
    spec.penalization = PauliSum::from_terms(std::move(pen), static_cast<std::uint32_t>(k));
    for (int j = 0; j < k; ++j)
        spec.factors.push_back(PauliString::single(Axis::X, static_cast<std::uint32_t>(j)));
    return spec;
}

RecipeReport validate_recipe(const RecipeSpec& spec, const Tolerances& tol) {
    const int k = spec.register_width;
    if (k < 1 || static_cast<int>(spec.factors.size()) != k)
        throw ValidationError("recipe needs exactly k perturbation factors");
    if (k > 12) throw DimensionError("recipe register above the brute-force cap of 12 qubits");
    if (spec.penalization.n_qubits() > static_cast<std::uint32_t>(k))
        throw ValidationError("penalization acts outside the register");
    for (const auto& f : spec.factors) {
        if (!f.is_identity() && f.max_qubit() >= static_cast<std::uint32_t>(k))
            throw ValidationError("perturbation factor acts outside the register");
    }

    RecipeReport report;
    const Eigen::Index dim = Eigen::Index(1) << k;
    PauliSum pen = spec.penalization;
    if (pen.n_qubits() < static_cast<std::uint32_t>(k)) {
        pen = PauliSum::from_terms({pen.terms().begin(), pen.terms().end()},
                                   static_cast<std::uint32_t>(k));
    }
    const Operator h = to_operator(pen, Storage::Dense);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.dense());
    const auto& energies = es.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(energies(0)), std::abs(energies(dim - 1))));

    int ground_dim = 1;
    while (ground_dim < dim &&
           energies(ground_dim) - energies(0) <= tol.degenerate_boundary * scale)
        ++ground_dim;
    RecipeCheck unique{"unique ground state", ground_dim == 1, "", ground_dim};
    if (!unique.passed)
        unique.witness = "degenerate ground space of dimension " + std::to_string(ground_dim);
    report.checks.push_back(unique);

    const StateVector gs = es.eigenvectors().col(0);

    // (ii) A = prod a_j fixes |GS> up to scale.
    StateVector ags = gs;
    for (auto it = spec.factors.rbegin(); it != spec.factors.rend(); ++it)
        ags = apply_pauli_string(*it, ags);
    const Complex eigval = gs.dot(ags);
    const double deviation = (ags - eigval * gs).norm();
    RecipeCheck fixes{"product fixes the ground state", deviation <= 1e-9, "", 0};
    if (!fixes.passed) fixes.witness = "||A|GS> - <GS|A|GS>|GS>|| = " + std::to_string(deviation);
    report.checks.push_back(fixes);

    // (iii) every proper sub-product, taken in index order, expels |GS>.
    RecipeCheck ortho{"sub-products expel the ground state", true, "", 0};
    int offenders = 0;
    for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
        StateVector x = gs;
        for (int j = k - 1; j >= 0; --j)
            if (mask >> j & 1) x = apply_pauli_string(spec.factors[static_cast<std::size_t>(j)], x);
        const double element = std::abs(gs.dot(x));
        if (element > 1e-9) {
            if (offenders == 0) {
                std::string subset = "{";
                for (int j = 0; j < k; ++j)
                    if (mask >> j & 1) subset += std::to_string(j + 1) + ",";
                subset.back() = '}';
                ortho.witness = "subset " + subset + " has |<GS|prod a|GS>| = " +
                                std::to_string(element);
            }
            ++offenders;
            ortho.passed = false;
        }
    }
    report.checks.push_back(ortho);

    // (iv) a_j^2 = I; automatic for Pauli strings, checked for completeness.
    RecipeCheck squares{"factors square to identity", true, "", 0};
    for (const auto& f : spec.factors) {
        const auto p = multiply(f, f);
        if (!p.string.is_identity() || !(p.phase == Phase::one())) {
            squares.passed = false;
            squares.witness = "factor " + f.to_string();
        }
    }
    report.checks.push_back(squares);

    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const RecipeCheck& c) { return c.passed; });
    return report;
}

GadgetModel build_from_recipe(const PauliSum& target, const RecipeSpec& spec,
                              const Tolerances& tol) {
    const RecipeReport report = validate_recipe(spec, tol);
    if (!report.passed) {
        std::string what = "recipe validation failed:";
        for (const auto& c : report.checks)
            if (!c.passed) what += " [" + c.name + ": " + c.witness + "]";
        throw ValidationError(what);
    }
    auto [body, shift] = split_identity(target);
    if (body.empty()) throw ValidationError("empty Hamiltonian");
    const int k = body.max_weight();
    if (k != spec.register_width)
        throw ValidationError("recipe register width " + std::to_string(spec.register_width) +
                              " does not match the maximum target weight " + std::to_string(k));

    GadgetModel g;
    g.kind = GadgetKind::Recipe;
    g.target = body;
    g.scalar_shift = shift;
    g.n_target = target.n_qubits();
    g.order = k;

    const auto r = static_cast<std::uint32_t>(body.size());
    g.total_qubits = g.n_target + r * static_cast<std::uint32_t>(k);

    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // -(-1)^k
    PauliSum h_aux = PauliSum::zero(g.total_qubits);
    std::vector<PauliTerm> v_terms;
    double abs_sum = 0;
    for (std::uint32_t s = 0; s < r; ++s) {
        const PauliTerm& term = body.terms()[s];
        const std::uint32_t base = g.n_target + s * static_cast<std::uint32_t>(k);
        std::vector<std::uint32_t> reg(k);
        std::iota(reg.begin(), reg.end(), base);
        g.aux_registers.push_back(reg);

        std::map<std::uint32_t, std::uint32_t> shift_map;
        for (int j = 0; j < k; ++j) shift_map[static_cast<std::uint32_t>(j)] = reg[static_cast<std::size_t>(j)];
        h_aux += spec.penalization.embedded(shift_map, g.total_qubits);

        const auto& sites = term.string.sites();
        for (int j = 1; j <= k; ++j) {
            double coeff;
            if (spec.rule == RecipeSpec::CoefficientRule::FirstTerm) {
                coeff = (j == 1) ? sign * term.coefficient : 1.0;
            } else {
                coeff = std::pow(std::abs(term.coefficient), 1.0 / k);
                if (j == 1 && sign * term.coefficient < 0) coeff = -coeff;
            }
            abs_sum += std::abs(coeff);
            std::vector<PauliString::Site> product;
            if (j <= static_cast<int>(sites.size())) product.push_back(sites[static_cast<std::size_t>(j - 1)]);
            const PauliString aj = embed(spec.factors[static_cast<std::size_t>(j - 1)], shift_map);
            for (const auto& site : aj.sites()) product.push_back(site);
            v_terms.push_back({coeff, PauliString::from_sites(std::move(product))});
        }
    }
    g.h_aux = h_aux;
    g.v = PauliSum::from_terms(std::move(v_terms), g.total_qubits);
    g.k_prime = std::max(g.v.max_weight(), g.h_aux.max_weight());  // realized locality

    // gamma and E0 from one register's penalization spectrum.
    const Operator h = to_operator(spec.penalization, Storage::Dense);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.dense(), Eigen::EigenvaluesOnly);
    const double gamma = es.eigenvalues()(1) - es.eigenvalues()(0);
    g.ground_energy_unperturbed = static_cast<double>(r) * es.eigenvalues()(0);
    g.lambda_max = gamma / (4.0 * abs_sum);
    return g;
}

std::array<PauliString, 3> decompose_xyz(const PauliString& term) {
    std::array<std::vector<PauliString::Site>, 3> parts;
    for (const auto& site : term.sites()) parts[static_cast<std::size_t>(site.second)].push_back(site);
    return {PauliString::from_sites(std::move(parts[0])),
            PauliString::from_sites(std::move(parts[1])),
            PauliString::from_sites(std::move(parts[2]))};
}

namespace {

std::vector<std::vector<int>> odd_subsets_by_cardinality(int half, std::size_t count) {
    // Odd-cardinality subsets of {1..half}, sorted by size then lexicographically.
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= half && out.size() < count; size += 2) {
        std::vector<int> combo(static_cast<std::size_t>(size));
        std::iota(combo.begin(), combo.end(), 1);
        while (true) {
            out.push_back(combo);
            if (out.size() == count) return out;
            int i = size - 1;
            while (i >= 0 && combo[static_cast<std::size_t>(i)] == half - (size - 1 - i)) --i;
            if (i < 0) break;
            ++combo[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

}  // namespace

GadgetModel build_measurement_gadget(const PauliSum& target) {
    if (target.empty()) throw ValidationError("empty Hamiltonian");
    const auto [body, shift] = split_identity(target);
    const auto r = body.size();
    int q = 2;
    if (r > 1) {
        int log2r = 0;
        while ((std::size_t(1) << log2r) < r) ++log2r;
        q = 2 * (log2r + 1);
    }
    const auto subsets = odd_subsets_by_cardinality(q / 2, r);
    return build_measurement_gadget(target, subsets);
}

GadgetModel build_measurement_gadget(const PauliSum& target,
                                     const std::vector<std::vector<int>>& subsets) {
    if (target.empty()) throw ValidationError("empty Hamiltonian");
    auto [body, shift] = split_identity(target);
    if (subsets.size() != body.size())
        throw ValidationError("need one auxiliary subset per target term");

    int max_element = 0;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        if (subsets[s].empty() || subsets[s].size() % 2 == 0)
            throw ValidationError("auxiliary subsets must have odd cardinality");
        for (int i : subsets[s]) {
            if (i < 1) throw ValidationError("subset entries are 1-based");
            max_element = std::max(max_element, i);
        }
        for (std::size_t p = 0; p < s; ++p)
            if (subsets[p] == subsets[s]) throw ValidationError("auxiliary subsets must be distinct");
    }

    GadgetModel g;
    g.kind = GadgetKind::Measurement;
    g.target = body;
    g.scalar_shift = shift;
    g.n_target = target.n_qubits();
    g.order = 3;
    g.k_prime = 0;

    const int q = body.empty() ? 0 : std::max(2 * max_element, 2);
    g.total_qubits = g.n_target + static_cast<std::uint32_t>(q);
    if (q > 0) {
        std::vector<std::uint32_t> reg(static_cast<std::size_t>(q));
        std::iota(reg.begin(), reg.end(), g.n_target);
        g.aux_registers.push_back(reg);
    }
    g.ground_energy_unperturbed = -static_cast<double>(q);

    std::vector<PauliTerm> h_aux_terms;
    for (int i = 0; i < q; ++i)
        h_aux_terms.push_back(
            {-1.0, PauliString::single(Axis::Z, g.n_target + static_cast<std::uint32_t>(i))});
    g.h_aux = PauliSum::from_terms(std::move(h_aux_terms), g.total_qubits);

    // Pair i occupies auxiliaries (2i-1, 2i) in 1-based counting. tau_i^X acts
    // on the first, tau_i^Y on the second, tau_i^Z on both.
    auto tau_product = [&](const std::vector<int>& subset, Axis axis) {
        std::vector<PauliString::Site> sites;
        for (int i : subset) {
            const std::uint32_t first = g.n_target + static_cast<std::uint32_t>(2 * (i - 1));
            if (axis == Axis::X || axis == Axis::Z) sites.emplace_back(first, Axis::X);
            if (axis == Axis::Y || axis == Axis::Z) sites.emplace_back(first + 1, Axis::X);
        }
        return PauliString::from_sites(std::move(sites));
    };

    std::vector<PauliTerm> v_terms;
    double abs_sum = 0;
    for (std::size_t s = 0; s < body.size(); ++s) {
        const PauliTerm& term = body.terms()[s];
        const auto m = static_cast<double>(subsets[s].size());
        const double c_tilde = std::cbrt(term.coefficient * m * m);  // real cube root
        const auto parts = decompose_xyz(term.string);
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            std::vector<PauliString::Site> sites = parts[static_cast<std::size_t>(axis)].sites();
            const PauliString tau = tau_product(subsets[s], axis);
            for (const auto& site : tau.sites()) sites.push_back(site);
            v_terms.push_back({c_tilde, PauliString::from_sites(std::move(sites))});
            abs_sum += std::abs(c_tilde);
        }
    }
    g.v = PauliSum::from_terms(std::move(v_terms), g.total_qubits);
    g.lambda_max = body.empty() ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * abs_sum);
    g.measurement_subsets = subsets;
    return g;
}

MeasurementLayout measurement_layout(const GadgetModel& g) {
    if (g.kind != GadgetKind::Measurement)
        throw ValidationError("measurement layout is defined for measurement gadgets only");
    MeasurementLayout layout;
    layout.q = static_cast<int>(g.total_qubits - g.n_target);
    layout.subsets = g.measurement_subsets;
    for (std::size_t s = 0; s < g.target.size(); ++s) {
        const auto m = static_cast<double>(layout.subsets[s].size());
        layout.c_tilde.push_back(std::cbrt(g.target.terms()[s].coefficient * m * m));
    }
    return layout;
}

namespace {

Axis first_factor_axis_of_register(const GadgetModel& g, std::uint32_t aux_qubit) {
    for (std::size_t s = 0; s < g.aux_registers.size(); ++s) {
        const auto& reg = g.aux_registers[s];
        if (std::find(reg.begin(), reg.end(), aux_qubit) != reg.end())
            return g.target.terms()[s].string.sites().front().second;
    }
    throw ValidationError("auxiliary qubit outside every register");
}

}  // namespace

std::vector<std::vector<PauliTerm>> measurement_groups(const GadgetModel& g) {
    if (g.kind != GadgetKind::Measurement && g.kind != GadgetKind::ThreeLocal)
        throw ValidationError("measurement grouping supports three-local and measurement gadgets");

    std::vector<std::vector<PauliTerm>> groups(4);  // aux-Z, X, Y, Z
    for (const auto& t : g.h_aux.terms()) groups[0].push_back(t);
    for (const auto& t : g.v.terms()) {
        const PauliString tgt = t.string.filter([&](std::uint32_t q) { return q < g.n_target; });
        std::size_t slot;
        if (!tgt.is_identity()) {
            slot = 1 + static_cast<std::size_t>(tgt.sites().front().second);
        } else if (g.kind == GadgetKind::ThreeLocal) {
            // Padding term: grouped with its register's leading factor axis.
            slot = 1 + static_cast<std::size_t>(
                           first_factor_axis_of_register(g, t.string.sites().front().first));
        } else {
            // Pure auxiliary coupling of the measurement gadget: the tau
            // structure identifies the axis (first of pair = X, second = Y,
            // pairs = Z).
            bool any_even = false;
            bool any_odd = false;
            for (const auto& [q, ax] : t.string.sites()) {
                ((q - g.n_target) % 2 == 0 ? any_even : any_odd) = true;
            }
            slot = any_even && any_odd ? 3 : (any_even ? 1 : 2);
        }
        groups[slot].push_back(t);
    }
    // The aux-Z group always exists; empty target-axis groups are dropped.
    std::vector<std::vector<PauliTerm>> out;
    out.push_back(std::move(groups[0]));
    for (std::size_t slot = 1; slot < 4; ++slot)
        if (!groups[slot].empty()) out.push_back(std::move(groups[slot]));
    return out;
}

std::vector<std::uint32_t> interleave_order(const GadgetModel& g) {
    if (g.kind != GadgetKind::ThreeLocal)
        throw ValidationError("interleaving is defined for the three-local gadget");

    // after[t] lists the auxiliary qubits placed right after target qubit t.
    std::vector<std::vector<std::uint32_t>> after(g.n_target);
    for (std::size_t s = 0; s < g.aux_registers.size(); ++s) {
        const auto& reg = g.aux_registers[s];
        const auto& sites = g.target.terms()[s].string.sites();
        for (std::size_t j = 0; j < reg.size(); ++j) {
            // Auxiliary j couples factor j; padding positions follow the last
            // real factor of their register.
            const std::size_t factor = std::min(j, sites.size() - 1);
            after[sites[factor].first].push_back(reg[j]);
        }
    }
    std::vector<std::uint32_t> new_order;
    new_order.reserve(g.total_qubits);
    for (std::uint32_t t = 0; t < g.n_target; ++t) {
        new_order.push_back(t);
        for (std::uint32_t a : after[t]) new_order.push_back(a);
    }
    std::vector<std::uint32_t> perm(g.total_qubits);
    for (std::uint32_t pos = 0; pos < new_order.size(); ++pos) perm[new_order[pos]] = pos;
    return perm;
}

PauliSum apply_permutation(const PauliSum& sum, const std::vector<std::uint32_t>& perm) {
    std::map<std::uint32_t, std::uint32_t> mapping;
    for (std::uint32_t old = 0; old < perm.size(); ++old) mapping[old] = perm[old];
    return sum.embedded(mapping, sum.n_qubits());
}

}  // namespace qgad
