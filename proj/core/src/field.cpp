#include "satnc/field.hpp"

#include <array>

#include "satnc/error.hpp"

namespace satnc {

namespace {

// Primitive polynomials, index = degree.
constexpr std::array<std::uint32_t, 17> kPrimitive = {
    0x0,    0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

}  // namespace

void FieldSpec::validate() const {
    if (m < 1 || m > 16) throw ConfigError("field degree m must lie in [1, 16]");
}

FieldSpec smallest_field_exceeding(int count) {
    FieldSpec spec{1};
    while (spec.m < 16 && static_cast<long long>(spec.order()) <= count) ++spec.m;
    return spec;
}

std::uint32_t reduction_polynomial(int m) {
    FieldSpec{m}.validate();
    return kPrimitive[static_cast<std::size_t>(m)];
}

Field::Field(FieldSpec spec) : spec_(spec) {
    spec_.validate();
    const std::uint32_t q = spec_.order();
    const std::uint32_t poly = kPrimitive[static_cast<std::size_t>(spec_.m)];
    exp_.assign(2 * (q - 1), 0);
    log_.assign(q, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        exp_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & q) x ^= poly;
    }
    for (std::uint32_t i = q - 1; i < 2 * (q - 1); ++i) exp_[i] = exp_[i - (q - 1)];
}

Element Field::inv(Element a) const {
    if (a == 0) throw DomainError("zero has no multiplicative inverse");
    const std::uint32_t q1 = order() - 1;
    return exp_[(q1 - log_[a]) % q1];
}

Element Field::dot(std::span<const Element> a, std::span<const Element> b) const {
    Element acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc ^= mul(a[i], b[i]);
    return acc;
}

void Field::axpy(Element k, std::span<const Element> x, std::span<Element> y) const {
    if (k == 0) return;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] ^= mul(k, x[i]);
}

GfMatrix GfMatrix::from_columns(std::span<const GfVector> columns, std::size_t height) {
    GfMatrix m(height, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < height; ++i) m.at(i, j) = columns[j][i];
    return m;
}

namespace {

/// Reduces `a` (and optionally the right-hand side) to row echelon form;
/// returns the pivot column of each pivot row.
std::vector<std::size_t> eliminate(const Field& f, GfMatrix& a, GfVector* rhs) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
        std::size_t p = row;
        while (p < a.rows && a.at(p, col) == 0) ++p;
        if (p == a.rows) continue;
        if (p != row) {
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(a.at(p, j), a.at(row, j));
            if (rhs) std::swap((*rhs)[p], (*rhs)[row]);
        }
        const Element scale = f.inv(a.at(row, col));
        for (std::size_t j = col; j < a.cols; ++j) a.at(row, j) = f.mul(a.at(row, j), scale);
        if (rhs) (*rhs)[row] = f.mul((*rhs)[row], scale);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == row) continue;
            const Element k = a.at(i, col);
            if (k == 0) continue;
            for (std::size_t j = col; j < a.cols; ++j) a.at(i, j) ^= f.mul(k, a.at(row, j));
            if (rhs) (*rhs)[i] ^= f.mul(k, (*rhs)[row]);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const Field& f, GfMatrix a) { return eliminate(f, a, nullptr).size(); }

std::optional<GfVector> solve(const Field& f, GfMatrix a, GfVector b) {
    if (b.size() != a.rows) throw ConsistencyError("right-hand side length mismatch");
    const auto pivots = eliminate(f, a, &b);
    for (std::size_t i = pivots.size(); i < a.rows; ++i)
        if (b[i] != 0) return std::nullopt;
    GfVector x(a.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = b[r];
    return x;
}

}  // namespace satnc
