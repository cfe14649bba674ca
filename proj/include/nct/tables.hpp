#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nct/checks.hpp"

// Per-word comparison tables for the command line tools. Every operand
// word of a density gets one table of engine values against its
// closed-form weight over a grid or an explicit point list. Engine
// values carry the pi^(3/2) of the density normalization so both
// columns are in the units the weights are quoted in. Rows whose
// coordinates fall within 1e-3 of a removable singularity of the closed
// forms (the axes and the antidiagonal) are dropped; the quadrature
// side is regular there but the reference column would be garbage.

namespace nct {

struct TableRow {
    std::vector<double> point;
    double engine = 0;
    double reference = 0;
    double abs_err = 0;
    double rel_err = 0;
};

struct WordTable {
    std::string metric;
    std::string object;
    bool has_entry = false;
    int entry_i = 0;  // 1-based when has_entry
    int entry_j = 0;
    int prefix = 0;
    std::string basis_word;
    std::string closed_form;
    std::vector<TableRow> rows;
};

namespace detail {

struct WordSpec {
    int i = -1;  // matrix entry, -1 for the scalar density
    int j = -1;
    GroupKey key;
    std::string closed_form;
    std::function<double(double, double)> ref;  // heads ignore the second slot
};

inline void push_head(std::vector<WordSpec>& v, int i, int j, int pfx,
                      const Atom& a, std::string name,
                      std::function<double(double)> f) {
    v.push_back({i, j, {pfx, {a}}, std::move(name),
                 [f = std::move(f)](double s, double) { return f(s); }});
}

inline void push_pair(std::vector<WordSpec>& v, int i, int j, int pfx,
                      const Atom& a, const Atom& b, std::string name,
                      std::function<double(double, double)> f) {
    v.push_back({i, j, {pfx, {a, b}}, std::move(name), std::move(f)});
}

inline std::vector<WordSpec> scalar_specs(const std::string& metric) {
    std::vector<WordSpec> v;
    if (metric == "conformal3") {
        namespace cf = ref::conf3;
        for (int j = 0; j < 3; ++j) {
            push_head(v, -1, -1, -2, d2(j), "K", cf::K);
            push_pair(v, -1, -1, -2, d1(j), d1(j), "H", cf::H);
        }
    } else {
        namespace mx = ref::mix3;
        for (int q = 0; q < 2; ++q) {
            push_head(v, -1, -1, 0, d2(q), "K1", mx::K1);
            push_pair(v, -1, -1, 0, d1(q), d1(q), "H1", mx::H1);
        }
        push_head(v, -1, -1, -2, d2(2), "K2", mx::K2);
        push_pair(v, -1, -1, -2, d1(2), d1(2), "H2", mx::H2);
    }
    return v;
}

inline std::vector<WordSpec> density_specs(const std::string& metric) {
    std::vector<WordSpec> v;
    if (metric == "conformal3") {
        namespace cf = ref::conf3;
        for (int i = 0; i < 3; ++i) {
            for (int l = 0; l < 3; ++l) {
                if (l == i) {
                    push_head(v, i, i, -2, d2(l), "-K/2 + F",
                              [](double s) { return -cf::K(s) / 2 + cf::F(s); });
                    push_pair(v, i, i, -2, d1(l), d1(l), "T + W",
                              [](double s, double t) { return cf::T(s, t) + cf::W(s, t); });
                } else {
                    push_head(v, i, i, -2, d2(l), "-K/2",
                              [](double s) { return -cf::K(s) / 2; });
                    push_pair(v, i, i, -2, d1(l), d1(l), "T", cf::T);
                }
            }
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                push_head(v, i, j, -2, dmix(i, j), "F", cf::F);
                push_pair(v, i, j, -2, d1(i), d1(j), "W - S",
                          [](double s, double t) { return cf::W(s, t) - cf::S(s, t); });
                push_pair(v, i, j, -2, d1(j), d1(i), "S", cf::S);
            }
        }
    } else {
        namespace mx = ref::mix3;
        for (int p = 0; p < 2; ++p) {
            for (int q = 0; q < 2; ++q) {
                push_head(v, p, p, 0, d2(q), "K11", mx::K11);
                push_pair(v, p, p, 0, d1(q), d1(q), "2 W11",
                          [](double s, double t) { return 2 * mx::W11(s, t); });
            }
            push_head(v, p, p, -2, d2(2), "K3", mx::K3);
            push_pair(v, p, p, -2, d1(2), d1(2), "H3", mx::H3);

            const int q = 1 - p;
            push_pair(v, p, q, 0, d1(p), d1(q), "S1", mx::S1);
            push_pair(v, p, q, 0, d1(q), d1(p), "-S1",
                      [](double s, double t) { return -mx::S1(s, t); });

            push_head(v, p, 2, -1, dmix(p, 2), "K13", mx::K13);
            push_pair(v, p, 2, -1, d1(p), d1(2), "W13 + S13",
                      [](double s, double t) { return mx::W13(s, t) + mx::S13(s, t); });
            push_pair(v, p, 2, -1, d1(2), d1(p), "W13 - S13",
                      [](double s, double t) { return mx::W13(s, t) - mx::S13(s, t); });

            push_head(v, 2, p, -1, dmix(p, 2), "K31", mx::K31);
            push_pair(v, 2, p, -1, d1(2), d1(p), "W31 + S31",
                      [](double s, double t) { return mx::W31(s, t) + mx::S31(s, t); });
            push_pair(v, 2, p, -1, d1(p), d1(2), "W31 - S31",
                      [](double s, double t) { return mx::W31(s, t) - mx::S31(s, t); });
        }
        for (int q = 0; q < 2; ++q) {
            push_head(v, 2, 2, 0, d2(q), "K1", mx::K1);
            push_pair(v, 2, 2, 0, d1(q), d1(q), "H1", mx::H1);
        }
        push_head(v, 2, 2, -2, d2(2), "K33", mx::K33);
        push_pair(v, 2, 2, -2, d1(2), d1(2), "H4 + 2 W33",
                  [](double s, double t) { return mx::H4(s, t) + 2 * mx::W33(s, t); });
    }
    return v;
}

inline std::vector<WordSpec> ricci_specs(const std::string& metric) {
    std::vector<WordSpec> v;
    if (metric == "conformal3") {
        namespace cf = ref::conf3;
        for (int i = 0; i < 3; ++i) {
            for (int l = 0; l < 3; ++l) {
                if (l == i) {
                    push_head(v, i, i, -2, d2(l), "3K/2 - F",
                              [](double s) { return 1.5 * cf::K(s) - cf::F(s); });
                    push_pair(v, i, i, -2, d1(l), d1(l), "H - T - W",
                              [](double s, double t) {
                                  return cf::H(s, t) - cf::T(s, t) - cf::W(s, t);
                              });
                } else {
                    push_head(v, i, i, -2, d2(l), "3K/2",
                              [](double s) { return 1.5 * cf::K(s); });
                    push_pair(v, i, i, -2, d1(l), d1(l), "H - T",
                              [](double s, double t) { return cf::H(s, t) - cf::T(s, t); });
                }
            }
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                push_head(v, i, j, -2, dmix(i, j), "-F",
                          [](double s) { return -cf::F(s); });
                push_pair(v, i, j, -2, d1(i), d1(j), "S - W",
                          [](double s, double t) { return cf::S(s, t) - cf::W(s, t); });
                push_pair(v, i, j, -2, d1(j), d1(i), "-S",
                          [](double s, double t) { return -cf::S(s, t); });
            }
        }
    } else {
        namespace mx = ref::mix3;
        for (int p = 0; p < 2; ++p) {
            for (int q = 0; q < 2; ++q) {
                push_head(v, p, p, 0, d2(q), "-tK11",
                          [](double s) { return -mx::tK11(s); });
                push_pair(v, p, p, 0, d1(q), d1(q), "-2 tW11",
                          [](double s, double t) { return -2 * mx::tW11(s, t); });
            }
            push_head(v, p, p, -2, d2(2), "-tK3",
                      [](double s) { return -mx::tK3(s); });
            push_pair(v, p, p, -2, d1(2), d1(2), "-tH3",
                      [](double s, double t) { return -mx::tH3(s, t); });

            const int q = 1 - p;
            push_pair(v, p, q, 0, d1(p), d1(q), "-S1",
                      [](double s, double t) { return -mx::S1(s, t); });
            push_pair(v, p, q, 0, d1(q), d1(p), "S1", mx::S1);

            push_head(v, p, 2, -1, dmix(p, 2), "-K13",
                      [](double s) { return -mx::K13(s); });
            push_pair(v, p, 2, -1, d1(p), d1(2), "-W13 - S13",
                      [](double s, double t) { return -mx::W13(s, t) - mx::S13(s, t); });
            push_pair(v, p, 2, -1, d1(2), d1(p), "S13 - W13",
                      [](double s, double t) { return mx::S13(s, t) - mx::W13(s, t); });

            push_head(v, 2, p, -1, dmix(p, 2), "-K31",
                      [](double s) { return -mx::K31(s); });
            push_pair(v, 2, p, -1, d1(2), d1(p), "-W31 - S31",
                      [](double s, double t) { return -mx::W31(s, t) - mx::S31(s, t); });
            push_pair(v, 2, p, -1, d1(p), d1(2), "S31 - W31",
                      [](double s, double t) { return mx::S31(s, t) - mx::W31(s, t); });
        }
        for (int q = 0; q < 2; ++q) {
            push_head(v, 2, 2, 0, d2(q), "0", [](double) { return 0.0; });
            push_pair(v, 2, 2, 0, d1(q), d1(q), "0",
                      [](double, double) { return 0.0; });
        }
        push_head(v, 2, 2, -2, d2(2), "-tK33",
                  [](double s) { return -mx::tK33(s); });
        push_pair(v, 2, 2, -2, d1(2), d1(2), "-tH4 - 2 tW33",
                  [](double s, double t) { return -mx::tH4(s, t) - 2 * mx::tW33(s, t); });
    }
    return v;
}

inline bool excluded_single(double s) { return std::abs(s) < 1e-3; }

inline bool excluded_pair(double s, double t) {
    return std::abs(s) < 1e-3 || std::abs(t) < 1e-3 || std::abs(s + t) < 1e-3;
}

}  // namespace detail

struct TableRequest {
    std::string metric;  // conformal3 | nonconformal3, validated by the caller
    std::string object;  // scalar | density | ricci
    std::vector<double> grid;
    std::vector<std::pair<double, double>> points;  // overrides the grid when set
    double tol = 1e-6;
};

inline std::vector<WordTable> build_tables(const TableRequest& req) {
    if (req.metric != "conformal3" && req.metric != "nonconformal3")
        throw std::invalid_argument("no tables for metric " + req.metric);
    const MetricDescriptor& m = *metric_by_name(req.metric);

    std::vector<detail::WordSpec> specs;
    Grouped gs;
    std::array<std::array<Grouped, 3>, 3> gm;
    if (req.object == "scalar") {
        specs = detail::scalar_specs(req.metric);
        gs = group_terms(cached_scalar(m));
    } else if (req.object == "density") {
        specs = detail::density_specs(req.metric);
        gm = detail::group_matrix(cached_one_form(m));
    } else if (req.object == "ricci") {
        specs = detail::ricci_specs(req.metric);
        gm = detail::group_matrix(cached_ricci(m));
    } else {
        throw std::invalid_argument("no tables for object " + req.object);
    }

    std::vector<WordTable> out;
    for (const detail::WordSpec& sp : specs) {
        const Grouped& g = sp.i < 0 ? gs : gm[sp.i][sp.j];
        const auto it = g.find(sp.key);
        if (it == g.end())
            throw std::runtime_error("operand word " + word_str(sp.key.second)
                                     + " missing from the " + req.metric + " "
                                     + req.object + " density");
        WordTable tab;
        tab.metric = req.metric;
        tab.object = req.object;
        tab.has_entry = sp.i >= 0;
        tab.entry_i = sp.i + 1;
        tab.entry_j = sp.j + 1;
        tab.prefix = sp.key.first;
        tab.basis_word = word_str(sp.key.second);
        tab.closed_form = sp.closed_form;

        auto add_row = [&](double s, double t, bool is_pair) {
            TableRow row;
            row.point = is_pair ? std::vector<double>{s, t} : std::vector<double>{s};
            row.engine = detail::pi_32
                         * eval_group(it->second, is_pair ? std::vector<double>{s, t}
                                                          : std::vector<double>{s});
            row.reference = sp.ref(s, t);
            row.abs_err = std::abs(row.engine - row.reference);
            row.rel_err = detail::rel_err(row.engine, row.reference);
            tab.rows.push_back(std::move(row));
        };

        const bool is_pair = sp.key.second.size() == 2;
        if (!req.points.empty()) {
            for (const auto& [s, t] : req.points) {
                if (is_pair ? detail::excluded_pair(s, t) : detail::excluded_single(s))
                    continue;
                add_row(s, t, is_pair);
            }
        } else if (is_pair) {
            for (double s : req.grid)
                for (double t : req.grid) {
                    if (detail::excluded_pair(s, t)) continue;
                    add_row(s, t, true);
                }
        } else {
            for (double s : req.grid) {
                if (detail::excluded_single(s)) continue;
                add_row(s, 0, false);
            }
        }
        out.push_back(std::move(tab));
    }
    return out;
}

}  // namespace nct
