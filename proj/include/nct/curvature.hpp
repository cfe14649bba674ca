#pragma once

// End to end pipelines: operator -> parametrix -> fibre integral ->
// spectral rearrangement -> log-k form.  The scalar density comes from the
// function operator; the Ricci density is the scalar density on the
// diagonal minus the second density of the operator on 1-forms.

#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nct/fspec.hpp"
#include "nct/metric.hpp"
#include "nct/reduce.hpp"
#include "nct/resolvent.hpp"
#include "nct/spectral.hpp"
#include "nct/symbols.hpp"
#include "nct/translate.hpp"

namespace nct {

inline SpectralSum density_from_symbol(const SymbolExpr& b2, const MetricDescriptor& m) {
    SpectralSum out;
    for (const RadialTerm& rt : reduce(b2, m)) {
        SpectralTerm st = to_spectral(rt, m);
        const int deg = spectral_k_degree(st);
        normalize_spectral(st);
        if (spectral_k_degree(st) != deg)
            throw std::logic_error("density: k-degree lost in normalisation");
        for (SpectralTerm& tr : translate(st)) {
            if (spectral_k_degree(tr) != deg)
                throw std::logic_error("density: k-degree lost in log-k rewriting");
            out.push_back(std::move(tr));
        }
    }
    return out;
}

inline SpectralSum scalar_density(const MetricDescriptor& m) {
    auto p = parametrix_scalar(m.laplace0, m);
    return density_from_symbol(p.b2[0][0], m);
}

using SpectralMat = std::array<std::array<SpectralSum, 3>, 3>;

inline SpectralMat one_form_density(const MetricDescriptor& m) {
    if (!m.has_one_form)
        throw std::invalid_argument("one_form_density: metric has no 1-form operator");
    auto p = parametrix<3>(m.laplace1, m);
    SpectralMat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = density_from_symbol(p.b2[i][j], m);
    return out;
}

inline void append_scaled(SpectralSum& dst, const SpectralSum& src, const Rational& scale) {
    for (SpectralTerm t : src) {
        t.fn.coeff *= Coefficient(scale);
        dst.push_back(std::move(t));
    }
}

inline SpectralMat ricci_density(const MetricDescriptor& m) {
    SpectralSum scalar = scalar_density(m);
    SpectralMat one_form = one_form_density(m);
    SpectralMat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) append_scaled(out[i][j], scalar, Rational(1));
            append_scaled(out[i][j], one_form[i][j], Rational(-1));
        }
    return out;
}

// Grouping by (prefix, operand word) for printing and comparison; the
// functions of one group are summed pointwise.
using GroupKey = std::pair<int, Word>;
using Grouped = std::map<GroupKey, std::vector<SpectralFn>>;

inline Grouped group_terms(const SpectralSum& s) {
    Grouped g;
    for (const SpectralTerm& t : s) g[{t.prefix, t.w}].push_back(t.fn);
    return g;
}

inline double eval_group(const std::vector<SpectralFn>& fns, const std::vector<double>& s) {
    double acc = 0;
    for (const SpectralFn& f : fns) acc += f.eval(s);
    return acc;
}

} // namespace nct
