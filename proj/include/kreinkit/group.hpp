#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kreinkit/core.hpp"

namespace kreinkit {

/// A finite group given by its Cayley table: table[a][b] = index of a*b.
class FiniteGroup {
public:
    FiniteGroup() = default;
    FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table, int identity)
        : labels_(std::move(labels)), table_(std::move(table)), identity_(identity) {
        const int m = order();
        if (m < 1) throw DomainError("group must have at least one element");
        if (static_cast<int>(labels_.size()) != m) throw DomainError("label count does not match table size");
        if (identity_ < 0 || identity_ >= m) throw DomainError("identity index out of range");
        for (const auto& row : table_) {
            if (static_cast<int>(row.size()) != m) throw DomainError("Cayley table must be square");
            for (int v : row)
                if (v < 0 || v >= m) throw DomainError("Cayley table entry out of range");
        }
        inverse_.assign(m, -1);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
    }

    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[a][b]; }
    /// -1 when the table gives the element no two-sided inverse.
    int inverse(int a) const { return inverse_[a]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    struct Diagnostics {
        bool latin_square = true;
        bool identity_ok = true;
        bool inverses_ok = true;
        bool associative = true;
        long associativity_failures = 0;
        bool valid() const { return latin_square && identity_ok && inverses_ok && associative; }
    };

    /// Group axioms: all triples for order <= 64, otherwise 10^4 seeded random triples.
    Diagnostics check(std::uint64_t seed = 0) const {
        Diagnostics d;
        const int m = order();
        for (int a = 0; a < m; ++a) {
            std::vector<char> row(m, 0), col(m, 0);
            for (int b = 0; b < m; ++b) {
                row[table_[a][b]] = 1;
                col[table_[b][a]] = 1;
            }
            for (int v = 0; v < m; ++v)
                if (!row[v] || !col[v]) d.latin_square = false;
            if (table_[identity_][a] != a || table_[a][identity_] != a) d.identity_ok = false;
            if (inverse_[a] < 0) d.inverses_ok = false;
        }
        auto triple = [&](int a, int b, int c) {
            if (mul(mul(a, b), c) != mul(a, mul(b, c))) ++d.associativity_failures;
        };
        if (m <= 64) {
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c) triple(a, b, c);
        } else {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<int> pick(0, m - 1);
            for (int i = 0; i < 10000; ++i) triple(pick(rng), pick(rng), pick(rng));
        }
        d.associative = d.associativity_failures == 0;
        return d;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> table_;
    int identity_ = 0;
    std::vector<int> inverse_;
};

/// A finite matrix group generated by closure, with its Cayley table and defining matrices.
template <typename T = double>
struct MatrixGroup {
    FiniteGroup group;
    std::vector<CMatrix<T>> elements;
};

/// Closes a set of invertible matrices under multiplication (up to max_order elements).
template <typename T>
MatrixGroup<T> generate_group(const std::vector<CMatrix<T>>& generators, const std::string& prefix = "g",
                              int max_order = 4096, T tol = T(1e-9)) {
    if (generators.empty()) throw DomainError("need at least one generator");
    const Eigen::Index d = generators.front().rows();
    std::vector<CMatrix<T>> elems{CMatrix<T>::Identity(d, d)};
    auto find = [&](const CMatrix<T>& m) -> int {
        for (std::size_t i = 0; i < elems.size(); ++i)
            if ((elems[i] - m).cwiseAbs().maxCoeff() <= tol) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t frontier = 0; frontier < elems.size(); ++frontier) {
        for (const auto& g : generators) {
            CMatrix<T> p = elems[frontier] * g;
            if (find(p) < 0) {
                elems.push_back(std::move(p));
                if (static_cast<int>(elems.size()) > max_order) throw DomainError("generated group exceeds max order");
            }
        }
    }
    const int m = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const int idx = find(elems[a] * elems[b]);
            if (idx < 0) throw NumericalError("matrix closure is not a group (tolerance too tight?)");
            table[a][b] = idx;
        }
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) labels.push_back(i == 0 ? "e" : prefix + std::to_string(i));
    MatrixGroup<T> out;
    out.group = FiniteGroup(std::move(labels), std::move(table), 0);
    out.elements = std::move(elems);
    return out;
}

/// Per-element operators over an indefinite space.
template <typename T = double>
class GroupRep {
public:
    GroupRep() = default;
    GroupRep(FiniteGroup group, IndefiniteSpace space, std::vector<CMatrix<T>> mats)
        : group_(std::move(group)), space_(space), mats_(std::move(mats)) {
        if (static_cast<int>(mats_.size()) != group_.order())
            throw DomainError("representation needs one matrix per group element");
        for (const auto& m : mats_)
            if (m.rows() != space_.dim() || m.cols() != space_.dim())
                throw DomainError("representation matrix shape does not match space");
    }

    const FiniteGroup& group() const { return group_; }
    const IndefiniteSpace& space() const { return space_; }
    const std::vector<CMatrix<T>>& matrices() const { return mats_; }
    const CMatrix<T>& operator()(int g) const { return mats_[g]; }
    BlockOperator<T> op(int g) const { return BlockOperator<T>(space_, mats_[g]); }

    /// max_g ||pi(g)||.
    T bound() const {
        T b = 0;
        for (const auto& m : mats_) b = std::max(b, opnorm(m));
        return b;
    }

private:
    FiniteGroup group_;
    IndefiniteSpace space_;
    std::vector<CMatrix<T>> mats_;
};

template <typename T = double>
struct RepDiagnostics {
    T homomorphism_defect = 0;  // max ||pi(gh) - pi(g)pi(h)||
    T identity_defect = 0;      // ||pi(e) - I||
    T unitarity_defect = 0;     // max ||pi(g)* J pi(g) - J||
    bool homomorphism_ok = false;
    bool identity_ok = false;
    bool j_unitary = false;
    bool table_ok = false;
    bool valid() const { return homomorphism_ok && identity_ok && j_unitary && table_ok; }
};

template <typename T>
RepDiagnostics<T> rep_validate(const GroupRep<T>& rep, T tol = T(1e-9), std::uint64_t seed = 0) {
    RepDiagnostics<T> d;
    const auto& g = rep.group();
    const int m = g.order();
    const Eigen::Index n = rep.space().dim();
    const T b = std::max(T(1), rep.bound());
    d.table_ok = g.check(seed).valid();
    auto pair = [&](int a, int c) {
        d.homomorphism_defect = std::max(d.homomorphism_defect, opnorm((rep(g.mul(a, c)) - rep(a) * rep(c)).eval()));
    };
    if (m <= 64) {
        for (int a = 0; a < m; ++a)
            for (int c = 0; c < m; ++c) pair(a, c);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, m - 1);
        for (int i = 0; i < 4096; ++i) pair(pick(rng), pick(rng));
    }
    d.identity_defect = opnorm((rep(g.identity()) - CMatrix<T>::Identity(n, n)).eval());
    const CMatrix<T> J = rep.space().template J<T>();
    for (int a = 0; a < m; ++a)
        d.unitarity_defect = std::max(d.unitarity_defect, opnorm((rep(a).adjoint() * J * rep(a) - J).eval()));
    d.homomorphism_ok = d.homomorphism_defect <= tol * b * b;
    d.identity_ok = d.identity_defect <= tol;
    d.j_unitary = d.unitarity_defect <= tol * b * b;
    return d;
}

}  // namespace kreinkit
