#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace satnc {

/// Field element in the polynomial basis, low bit = constant term.
using Element = std::uint32_t;
using GfVector = std::vector<Element>;

/// Extension degree of a characteristic-2 field GF(2^m), 1 <= m <= 16.
struct FieldSpec {
    int m = 8;

    std::uint32_t order() const { return std::uint32_t{1} << m; }
    /// Bits per symbol, ceil(log2 |F|).
    int bits() const { return m; }
    void validate() const;
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Smallest field whose order exceeds `count` (e.g. the number of sinks).
FieldSpec smallest_field_exceeding(int count);

/// Primitive reduction polynomial used for GF(2^m).
std::uint32_t reduction_polynomial(int m);

/// GF(2^m) arithmetic through log/antilog tables.
class Field {
public:
    explicit Field(FieldSpec spec);
    explicit Field(int m) : Field(FieldSpec{m}) {}

    const FieldSpec& spec() const { return spec_; }
    std::uint32_t order() const { return spec_.order(); }

    static Element add(Element a, Element b) { return a ^ b; }
    static Element sub(Element a, Element b) { return a ^ b; }
    Element mul(Element a, Element b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    /// Throws DomainError for 0.
    Element inv(Element a) const;
    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    Element dot(std::span<const Element> a, std::span<const Element> b) const;
    /// y += k * x
    void axpy(Element k, std::span<const Element> x, std::span<Element> y) const;

private:
    FieldSpec spec_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

/// Row-major matrix over a field.
struct GfMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Element> data;

    GfMatrix() = default;
    GfMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    Element& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    Element at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    /// Matrix whose columns are the given vectors (all of equal length).
    static GfMatrix from_columns(std::span<const GfVector> columns, std::size_t height);
};

std::size_t rank(const Field& f, GfMatrix a);

/// Solves a*x = b. Free variables are set to zero, so the solution only uses
/// the earliest independent columns. Empty when inconsistent.
std::optional<GfVector> solve(const Field& f, GfMatrix a, GfVector b);

}  // namespace satnc
