#pragma once

// Quote files, curve files and the built-in fixture catalog.
//
// Quote file:
//   # forward=101
//   # maturity=0.25
//   strike,vol[,weight][,bid,ask]
//   88.77,0.2
//
// Curve file: strike,otm_price,call_price,implied_vol,density[,discounted_price]

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lvg/black.hpp"
#include "lvg/error.hpp"
#include "lvg/fixture_data.hpp"
#include "lvg/pdde.hpp"
#include "lvg/quotes.hpp"

namespace lvg {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

inline std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

inline bool is_key(std::string_view k) {
    if (k.empty() || !(std::isalpha(static_cast<unsigned char>(k[0])) || k[0] == '_')) return false;
    return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

struct ParseReport {
    std::vector<std::string> warnings;
    std::vector<std::size_t> zero_weight_rows;  // indices into the sorted quote set
};

/// Reads a quote file. Rows are sorted by strike (with a warning) when needed; when bid and
/// ask vols are given the vol cell may be left empty and the mid is used, and an absent
/// weight column is replaced by inverse-spread weights scaled to a maximum of one.
inline QuoteSet parse_quote_csv(std::istream& in, ParseReport* report = nullptr) {
    QuoteSet q;
    std::map<std::string, std::string, std::less<>> meta;
    std::vector<std::string> columns;
    struct Row {
        double strike;
        std::optional<double> vol, weight, bid, ask;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = detail::trim(line);
        if (s.empty()) continue;
        if (s.front() == '#') {
            const auto body = detail::trim(s.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = detail::trim(body.substr(0, eq));
            if (!detail::is_key(key)) continue;
            meta[std::string(key)] = std::string(detail::trim(body.substr(eq + 1)));
            continue;
        }
        const auto cells = detail::split(s, ',');
        if (columns.empty()) {
            for (auto c : cells) {
                if (c != "strike" && c != "vol" && c != "weight" && c != "bid" && c != "ask") {
                    detail::parse_fail(lineno, "unknown column '" + std::string(c) + "'");
                }
                if (std::find(columns.begin(), columns.end(), c) != columns.end()) {
                    detail::parse_fail(lineno, "duplicate column '" + std::string(c) + "'");
                }
                columns.emplace_back(c);
            }
            const auto has = [&](const char* c) { return std::find(columns.begin(), columns.end(), c) != columns.end(); };
            if (!has("strike") || !has("vol")) detail::parse_fail(lineno, "header needs strike and vol columns");
            if (has("bid") != has("ask")) detail::parse_fail(lineno, "bid and ask must come together");
            continue;
        }
        if (cells.size() != columns.size()) {
            detail::parse_fail(lineno, "expected " + std::to_string(columns.size()) + " fields, got " + std::to_string(cells.size()));
        }
        Row r{};
        bool have_strike = false;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto v = detail::to_double(cells[j]);
            if (!v && !cells[j].empty()) detail::parse_fail(lineno, "not a number: '" + std::string(cells[j]) + "'");
            const auto& c = columns[j];
            if (c == "strike") {
                if (!v) detail::parse_fail(lineno, "missing strike");
                r.strike = *v;
                have_strike = true;
            } else if (c == "vol") {
                r.vol = v;
            } else if (c == "weight") {
                r.weight = v;
            } else if (c == "bid") {
                r.bid = v;
            } else {
                r.ask = v;
            }
        }
        if (!have_strike) detail::parse_fail(lineno, "missing strike");
        if (!r.vol) {
            if (!(r.bid && r.ask)) detail::parse_fail(lineno, "missing vol");
            r.vol = 0.5 * (*r.bid + *r.ask);
        }
        rows.push_back(r);
    }
    if (columns.empty()) throw Error(ErrorCode::ParseError, "no header row");

    const auto get = [&](const char* key) -> std::optional<double> {
        const auto it = meta.find(key);
        if (it == meta.end()) return std::nullopt;
        const auto v = detail::to_double(it->second);
        if (!v) throw Error(ErrorCode::ParseError, std::string("metadata ") + key + " is not a number");
        return v;
    };
    const auto forward = get("forward");
    const auto maturity = get("maturity");
    if (!forward) throw Error(ErrorCode::MissingMetadata, "forward");
    if (!maturity) throw Error(ErrorCode::MissingMetadata, "maturity");
    q.forward = *forward;
    q.maturity = *maturity;
    q.discount = get("discount");
    q.spot = get("spot");
    if (const auto it = meta.find("name"); it != meta.end()) q.name = it->second;

    if (!std::is_sorted(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.strike < b.strike; })) {
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.strike < b.strike; });
        if (report) report->warnings.emplace_back("strikes were not sorted; rows reordered");
    }
    const bool has_weight = std::find(columns.begin(), columns.end(), "weight") != columns.end();
    const bool has_spread = std::find(columns.begin(), columns.end(), "bid") != columns.end();
    for (const auto& r : rows) {
        q.strikes.push_back(r.strike);
        q.vols.push_back(*r.vol);
        if (has_spread) {
            q.bids.push_back(r.bid.value_or(std::nan("")));
            q.asks.push_back(r.ask.value_or(std::nan("")));
        }
        if (has_weight) {
            q.weights.push_back(r.weight.value_or(1.0));
        } else if (has_spread) {
            const double spread = (r.bid && r.ask) ? std::max(*r.ask - *r.bid, 1e-4) : 1.0;
            q.weights.push_back(1.0 / spread);
        }
    }
    if (!has_weight && has_spread && !q.weights.empty()) {
        const double top = *std::max_element(q.weights.begin(), q.weights.end());
        for (double& w : q.weights) w /= top;
    }
    for (std::size_t i = 0; i < q.weights.size(); ++i) {
        if (q.weights[i] == 0.0 && report) report->zero_weight_rows.push_back(i);
    }
    q.validate();
    q.complete();
    return q;
}

inline QuoteSet parse_quote_csv(const std::string& text, ParseReport* report = nullptr) {
    std::istringstream in(text);
    return parse_quote_csv(in, report);
}

inline QuoteSet load_quote_csv(const std::string& path, ParseReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    auto q = parse_quote_csv(in, report);
    return q;
}

/// Writes a quote file in the format read by parse_quote_csv.
inline std::string emit_quote_csv(const QuoteSet& q) {
    std::ostringstream out;
    if (!q.name.empty()) out << "# name=" << q.name << '\n';
    out << "# forward=" << detail::format_double(q.forward) << '\n';
    out << "# maturity=" << detail::format_double(q.maturity) << '\n';
    if (q.discount) out << "# discount=" << detail::format_double(*q.discount) << '\n';
    if (q.spot) out << "# spot=" << detail::format_double(*q.spot) << '\n';
    const bool spread = !q.bids.empty();
    out << "strike,vol,weight" << (spread ? ",bid,ask" : "") << '\n';
    for (std::size_t i = 0; i < q.size(); ++i) {
        out << detail::format_double(q.strikes[i]) << ',' << detail::format_double(q.vols[i]) << ','
            << detail::format_double(q.weight(i));
        if (spread) out << ',' << detail::format_double(q.bids[i]) << ',' << detail::format_double(q.asks[i]);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------------------
// Curves

inline std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw Error(ErrorCode::InvalidCount, "grid needs n >= 2 and b > a");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    x.back() = b;
    return x;
}

/// Quoted strikes with `refine` equally spaced points inserted in every gap.
inline std::vector<double> quote_grid(const std::vector<double>& strikes, std::size_t refine = 0) {
    std::vector<double> x;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        x.push_back(strikes[i]);
        if (i + 1 == strikes.size()) break;
        for (std::size_t j = 1; j <= refine; ++j) {
            x.push_back(strikes[i] + (strikes[i + 1] - strikes[i]) * static_cast<double>(j) / static_cast<double>(refine + 1));
        }
    }
    return x;
}

struct CurveRow {
    double strike = 0.0;
    double otm_price = 0.0;
    double call_price = 0.0;
    double implied_vol = 0.0;  // NaN where the price carries no time value
    double density = 0.0;
    std::optional<double> discounted_price;  // discount * call_price
};

inline std::vector<CurveRow> evaluate_curve(const LVGSolution& sol, const std::vector<double>& grid,
                                            std::optional<double> discount = std::nullopt) {
    std::vector<CurveRow> rows;
    rows.reserve(grid.size());
    const double f = sol.forward();
    for (double k : grid) {
        if (!(k >= sol.lower() && k <= sol.upper())) {
            throw Error(ErrorCode::OutOfDomain, "grid point " + detail::format_double(k) + " outside [L, U]");
        }
        CurveRow r;
        r.strike = k;
        r.otm_price = sol.value(k);
        r.call_price = sol.price(k, OptionKind::Call);
        r.implied_vol = std::nan("");
        if (k > 0.0) {
            try {
                r.implied_vol = implied_vol(r.otm_price, f, k, sol.maturity(), k >= f ? OptionKind::Call : OptionKind::Put);
            } catch (const Error&) {
            }
        }
        r.density = (k > sol.lower() && k < sol.upper()) ? sol.density(k) : 0.0;
        if (discount) r.discounted_price = *discount * r.call_price;
        rows.push_back(r);
    }
    return rows;
}

inline std::string emit_curve_csv(const std::vector<CurveRow>& rows) {
    const bool disc = !rows.empty() && rows.front().discounted_price.has_value();
    std::string out = "strike,otm_price,call_price,implied_vol,density";
    out += disc ? ",discounted_price\n" : "\n";
    for (const auto& r : rows) {
        out += detail::format_double(r.strike) + ',' + detail::format_double(r.otm_price) + ',' +
               detail::format_double(r.call_price) + ',' + detail::format_double(r.implied_vol) + ',' +
               detail::format_double(r.density);
        if (disc) out += ',' + detail::format_double(r.discounted_price.value_or(std::nan("")));
        out += '\n';
    }
    return out;
}

inline std::string emit_curve_csv(const LVGSolution& sol, const std::vector<double>& grid,
                                  std::optional<double> discount = std::nullopt) {
    return emit_curve_csv(evaluate_curve(sol, grid, discount));
}

inline std::vector<CurveRow> parse_curve_csv(std::istream& in) {
    std::vector<CurveRow> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    bool disc = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto cells = detail::split(s, ',');
        if (!header) {
            const std::vector<std::string_view> base{"strike", "otm_price", "call_price", "implied_vol", "density"};
            disc = cells.size() == 6 && cells[5] == "discounted_price";
            if (cells.size() < 5 || !std::equal(base.begin(), base.end(), cells.begin()) || (cells.size() == 6 && !disc) ||
                cells.size() > 6) {
                detail::parse_fail(lineno, "unexpected curve header");
            }
            header = true;
            continue;
        }
        if (cells.size() != (disc ? 6u : 5u)) detail::parse_fail(lineno, "wrong number of fields");
        std::vector<double> v;
        for (auto c : cells) {
            if (c == "nan") {
                v.push_back(std::nan(""));
                continue;
            }
            const auto d = detail::to_double(c);
            if (!d) detail::parse_fail(lineno, "not a number: '" + std::string(c) + "'");
            v.push_back(*d);
        }
        CurveRow r{v[0], v[1], v[2], v[3], v[4], std::nullopt};
        if (disc) r.discounted_price = v[5];
        rows.push_back(r);
    }
    if (!header) throw Error(ErrorCode::ParseError, "no header row");
    return rows;
}

inline std::vector<CurveRow> parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_curve_csv(in);
}

// ---------------------------------------------------------------------------------------
// Fixtures

inline std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& f : fixtures::kFiles) out.emplace_back(f.name);
    return out;
}

inline std::optional<std::string_view> fixture_text(std::string_view name) {
    for (const auto& f : fixtures::kFiles) {
        if (f.name == name) return f.text;
    }
    return std::nullopt;
}

inline QuoteSet fixture(std::string_view name) {
    const auto text = fixture_text(name);
    if (!text) throw Error(ErrorCode::InvalidQuotes, "unknown fixture '" + std::string(name) + "'");
    auto q = parse_quote_csv(std::string(*text));
    if (q.name.empty()) q.name = std::string(name);
    return q;
}

inline std::map<std::string, QuoteSet> builtin_fixtures() {
    std::map<std::string, QuoteSet> out;
    for (const auto& f : fixtures::kFiles) out.emplace(std::string(f.name), fixture(f.name));
    return out;
}

} // namespace lvg
