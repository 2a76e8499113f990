#include "qgad/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "qgad/errors.hpp"

namespace qgad {

char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

PauliString PauliString::single(Axis axis, std::uint32_t qubit) {
    PauliString s;
    s.sites_ = {{qubit, axis}};
    return s;
}

PauliString PauliString::from_sites(std::vector<Site> sites) {
    std::sort(sites.begin(), sites.end(),
              [](const Site& a, const Site& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sites.size(); ++i) {
        if (sites[i].first == sites[i - 1].first) {
            throw ValidationError("duplicate qubit index " + std::to_string(sites[i].first) +
                                  " in Pauli string");
        }
    }
    PauliString s;
    s.sites_ = std::move(sites);
    return s;
}

std::optional<Axis> PauliString::axis_on(std::uint32_t qubit) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), qubit,
                               [](const Site& s, std::uint32_t q) { return s.first < q; });
    if (it != sites_.end() && it->first == qubit) return it->second;
    return std::nullopt;
}

std::uint32_t PauliString::min_qubit() const {
    if (sites_.empty()) throw ValidationError("min_qubit of identity string");
    return sites_.front().first;
}

std::uint32_t PauliString::max_qubit() const {
    if (sites_.empty()) throw ValidationError("max_qubit of identity string");
    return sites_.back().first;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
    const auto& a = sites_;
    const auto& b = other.sites_;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].first != b[i].first) return a[i].first <=> b[i].first;
        if (a[i].second != b[i].second)
            return static_cast<int>(a[i].second) <=> static_cast<int>(b[i].second);
    }
    return a.size() <=> b.size();
}

std::string PauliString::to_string() const {
    std::string out;
    for (const auto& [q, ax] : sites_) {
        if (!out.empty()) out += ' ';
        out += axis_char(ax);
        out += std::to_string(q);
    }
    return out;
}

std::complex<double> Phase::value() const {
    switch (exponent_) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

PhasedProduct multiply(const PauliString& a, const PauliString& b) {
    std::vector<PauliString::Site> out;
    Phase phase = Phase::one();
    const auto& sa = a.sites();
    const auto& sb = b.sites();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < sa.size() || j < sb.size()) {
        if (j == sb.size() || (i < sa.size() && sa[i].first < sb[j].first)) {
            out.push_back(sa[i++]);
        } else if (i == sa.size() || sb[j].first < sa[i].first) {
            out.push_back(sb[j++]);
        } else {
            const int pa = static_cast<int>(sa[i].second);
            const int pb = static_cast<int>(sb[j].second);
            if (pa == pb) {
                // same axis squares to identity
            } else if (pb == (pa + 1) % 3) {
                // cyclic: X*Y = iZ, Y*Z = iX, Z*X = iY
                out.emplace_back(sa[i].first, static_cast<Axis>((pa + 2) % 3));
                phase = phase * Phase::i();
            } else {
                out.emplace_back(sa[i].first, static_cast<Axis>((pa + 1) % 3));
                phase = phase * Phase::minus_i();
            }
            ++i;
            ++j;
        }
    }
    PhasedProduct result;
    result.phase = phase;
    result.string = PauliString::from_sites(std::move(out));
    return result;
}

bool commute(const PauliString& a, const PauliString& b) {
    // Strings commute iff they anticommute on an even number of qubits.
    int anti = 0;
    for (const auto& [q, ax] : a.sites()) {
        auto other = b.axis_on(q);
        if (other && *other != ax) ++anti;
    }
    return anti % 2 == 0;
}

bool qubitwise_commute(const PauliString& a, const PauliString& b) {
    for (const auto& [q, ax] : a.sites()) {
        auto other = b.axis_on(q);
        if (other && *other != ax) return false;
    }
    return true;
}

PauliString embed(const PauliString& term, const std::map<std::uint32_t, std::uint32_t>& mapping) {
    std::vector<PauliString::Site> out;
    out.reserve(term.sites().size());
    for (const auto& [q, ax] : term.sites()) {
        auto it = mapping.find(q);
        if (it == mapping.end()) {
            throw ValidationError("embed: mapping missing support qubit " + std::to_string(q));
        }
        out.emplace_back(it->second, ax);
    }
    try {
        return PauliString::from_sites(std::move(out));
    } catch (const ValidationError&) {
        throw ValidationError("embed: mapping collides on the support");
    }
}

PauliSum PauliSum::zero(std::uint32_t n_qubits) {
    PauliSum s;
    s.n_qubits_ = n_qubits;
    return s;
}

PauliSum PauliSum::from_terms(std::vector<PauliTerm> terms, std::optional<std::uint32_t> n_qubits) {
    PauliSum s;
    s.terms_ = std::move(terms);
    std::uint32_t support_width = 0;
    for (const auto& t : s.terms_) {
        if (!t.string.is_identity()) support_width = std::max(support_width, t.string.max_qubit() + 1);
    }
    if (n_qubits) {
        if (support_width > *n_qubits) {
            throw ValidationError("term support exceeds declared width");
        }
        s.n_qubits_ = *n_qubits;
    } else {
        s.n_qubits_ = support_width;
    }
    s.normalize();
    return s;
}

void PauliSum::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
    std::vector<PauliTerm> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().string == t.string) {
            merged.back().coefficient += t.coefficient;
        } else {
            merged.push_back(std::move(t));
        }
    }
    const double tol = Tolerances::defaults().coefficient_merge;
    std::erase_if(merged, [tol](const PauliTerm& t) { return std::abs(t.coefficient) <= tol; });
    terms_ = std::move(merged);
}

int PauliSum::max_weight() const {
    int w = 0;
    for (const auto& t : terms_) w = std::max(w, t.string.weight());
    return w;
}

double PauliSum::coefficient_of(const PauliString& s) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                               [](const PauliTerm& t, const PauliString& q) { return t.string < q; });
    if (it != terms_.end() && it->string == s) return it->coefficient;
    return 0.0;
}

PauliSum& PauliSum::operator+=(const PauliSum& rhs) {
    terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    n_qubits_ = std::max(n_qubits_, rhs.n_qubits_);
    normalize();
    return *this;
}

PauliSum& PauliSum::operator+=(const PauliTerm& t) {
    terms_.push_back(t);
    if (!t.string.is_identity()) n_qubits_ = std::max(n_qubits_, t.string.max_qubit() + 1);
    normalize();
    return *this;
}

PauliSum& PauliSum::operator*=(double c) {
    for (auto& t : terms_) t.coefficient *= c;
    normalize();
    return *this;
}

PauliSum PauliSum::embedded(const std::map<std::uint32_t, std::uint32_t>& mapping,
                            std::uint32_t new_width) const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        out.push_back({t.coefficient, embed(t.string, mapping)});
    }
    return from_terms(std::move(out), new_width);
}

namespace {

struct LineCursor {
    const std::string& text;
    int line;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line, static_cast<int>(pos) + 1);
    }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
};

double parse_coefficient(LineCursor& cur) {
    const char* begin = cur.text.c_str() + cur.pos;
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) cur.fail("expected coefficient");
    cur.pos += static_cast<std::size_t>(end - begin);
    return value;
}

std::uint32_t parse_index(LineCursor& cur) {
    if (cur.done() || !std::isdigit(static_cast<unsigned char>(cur.peek())))
        cur.fail("expected qubit index");
    std::uint64_t value = 0;
    while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        value = value * 10 + static_cast<std::uint64_t>(cur.peek() - '0');
        if (value > 0xffffffffULL) cur.fail("qubit index out of range");
        ++cur.pos;
    }
    return static_cast<std::uint32_t>(value);
}

}  // namespace

PauliSum parse_pauli_sum(std::istream& in) {
    std::vector<PauliTerm> terms;
    std::optional<std::uint32_t> declared;
    bool saw_term = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        LineCursor cur{raw, line_no};
        cur.skip_ws();
        if (cur.done()) continue;

        if (raw.compare(cur.pos, 7, "qubits:") == 0) {
            if (declared) cur.fail("duplicate qubits header");
            if (saw_term) cur.fail("qubits header must precede terms");
            cur.pos += 7;
            cur.skip_ws();
            declared = parse_index(cur);
            cur.skip_ws();
            if (!cur.done()) cur.fail("trailing characters after qubits header");
            continue;
        }

        double coeff = parse_coefficient(cur);
        cur.skip_ws();
        if (cur.done() || cur.peek() != '[') cur.fail("expected '['");
        ++cur.pos;
        std::vector<PauliString::Site> sites;
        while (true) {
            cur.skip_ws();
            if (cur.done()) cur.fail("unterminated term, expected ']'");
            if (cur.peek() == ']') {
                ++cur.pos;
                break;
            }
            Axis axis;
            switch (cur.peek()) {
                case 'X': axis = Axis::X; break;
                case 'Y': axis = Axis::Y; break;
                case 'Z': axis = Axis::Z; break;
                default: cur.fail("expected axis X, Y or Z");
            }
            ++cur.pos;
            const std::size_t index_col = cur.pos;
            std::uint32_t q = parse_index(cur);
            for (const auto& s : sites) {
                if (s.first == q) {
                    throw ParseError("duplicate axis on qubit " + std::to_string(q), line_no,
                                     static_cast<int>(index_col) + 1);
                }
            }
            if (declared && q >= *declared) {
                throw ParseError("qubit index " + std::to_string(q) +
                                     " exceeds declared width " + std::to_string(*declared),
                                 line_no, static_cast<int>(index_col) + 1);
            }
            sites.emplace_back(q, axis);
        }
        cur.skip_ws();
        if (!cur.done()) cur.fail("trailing characters after term");
        terms.push_back({coeff, PauliString::from_sites(std::move(sites))});
        saw_term = true;
    }
    return PauliSum::from_terms(std::move(terms), declared);
}

PauliSum parse_pauli_sum(const std::string& text) {
    std::istringstream in(text);
    return parse_pauli_sum(in);
}

std::string format_pauli_sum(const PauliSum& sum) {
    std::string out = "qubits: " + std::to_string(sum.n_qubits()) + "\n";
    char buf[64];
    for (const auto& t : sum.terms()) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
        out += buf;
        out += " [";
        out += t.string.to_string();
        out += "]\n";
    }
    return out;
}

}  // namespace qgad
