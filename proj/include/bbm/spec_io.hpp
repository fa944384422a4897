/*
   Copyright 2026 The bbm-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbm/energy.hpp"
#include "bbm/fields.hpp"
#include "bbm/geometry.hpp"
#include "bbm/kernels.hpp"
#include "bbm/sweep.hpp"

// Flat key=value records for kernels, domains and fields, plus CSV/JSON writers.
namespace bbm::io {

using Record = std::map<std::string, std::string>;

inline const std::vector<std::string> kKernelKeys{"family", "d", "p", "eps", "beta", "eps0", "base_eps"};
inline const std::vector<std::string> kDomainKeys{"kind", "d", "intervals", "lo", "hi", "center", "radius",
                                                  "gap", "axis", "offset", "sign"};
inline const std::vector<std::string> kFieldKeys{"kind", "d", "slope", "center", "radius", "h",
                                                 "scale", "offset", "value", "background"};

inline std::string join(const std::vector<std::string>& xs, const char* sep = ", ")
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

/// Parses "k=v" tokens; a token without '=' or a repeated key is rejected.
inline Record parse_record(const std::vector<std::string>& tokens)
{
    Record r;
    for (const auto& t : tokens) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("malformed record entry '" + t + "', expected key=value");
        auto [it, fresh] = r.emplace(t.substr(0, eq), t.substr(eq + 1));
        if (!fresh) throw std::invalid_argument("repeated key '" + it->first + "'");
    }
    return r;
}

inline void check_keys(const Record& r, const std::vector<std::string>& valid, const char* what)
{
    const std::set<std::string> ok(valid.begin(), valid.end());
    for (const auto& [k, v] : r)
        if (!ok.count(k))
            throw std::invalid_argument(std::string("unknown ") + what + " key '" + k + "'; valid keys: " + join(valid));
}

inline double to_double(const std::string& s, const std::string& key)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("key '" + key + "': '" + s + "' is not a number");
    return v;
}

inline int to_int(const std::string& s, const std::string& key)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("key '" + key + "': '" + s + "' is not an integer");
    return v;
}

inline std::vector<double> to_doubles(const std::string& s, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item, key));
    if (out.empty()) throw std::invalid_argument("key '" + key + "' is empty");
    return out;
}

inline Vec to_vec(const std::string& s, const std::string& key)
{
    const auto xs = to_doubles(s, key);
    if (static_cast<int>(xs.size()) > kMaxDim) throw std::invalid_argument("key '" + key + "': too many components");
    return Vec::from(xs);
}

inline std::string vec_str(const Vec& v)
{
    std::string s;
    for (int i = 0; i < v.dim(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

namespace detail {

struct Reader {
    const Record& r;
    bool has(const std::string& k) const { return r.count(k) > 0; }
    const std::string& need(const std::string& k) const
    {
        auto it = r.find(k);
        if (it == r.end()) throw std::invalid_argument("missing key '" + k + "'");
        return it->second;
    }
    double num(const std::string& k, double dflt) const { return has(k) ? to_double(r.at(k), k) : dflt; }
    double num(const std::string& k) const { return to_double(need(k), k); }
    int integer(const std::string& k, int dflt) const { return has(k) ? to_int(r.at(k), k) : dflt; }
    Vec vec(const std::string& k) const { return to_vec(need(k), k); }
};

} // namespace detail

// ---- kernels ----

inline KernelSpec kernel_from_record(const Record& r)
{
    check_keys(r, kKernelKeys, "kernel");
    detail::Reader in{r};
    KernelSpec k;
    k.family = parse_family(in.need("family"));
    k.dim = in.integer("d", 1);
    k.p = in.num("p", 2.0);
    k.eps = in.num("eps", 0.1);
    k.beta = in.num("beta", 0.0);
    k.eps0 = in.num("eps0", 0.5);
    k.base_eps = in.num("base_eps", 0.5);
    return k;
}

inline Record to_record(const KernelSpec& k)
{
    return {{"family", family_name(k.family)}, {"d", std::to_string(k.dim)}, {"p", format_double(k.p)},
            {"eps", format_double(k.eps)},     {"beta", format_double(k.beta)}, {"eps0", format_double(k.eps0)},
            {"base_eps", format_double(k.base_eps)}};
}

// ---- domains ----

inline Domain domain_from_record(const Record& r)
{
    check_keys(r, kDomainKeys, "domain");
    detail::Reader in{r};
    const std::string kind = in.need("kind");
    if (kind == "interval") return Domain::interval(in.num("lo"), in.num("hi"));
    switch (parse_domain_kind(kind)) {
    case DomainKind::IntervalUnion: {
        const auto xs = to_doubles(in.need("intervals"), "intervals");
        if (xs.size() % 2 != 0) throw std::invalid_argument("key 'intervals' needs lo,hi pairs");
        std::vector<Interval> ivs;
        for (std::size_t i = 0; i < xs.size(); i += 2) ivs.push_back({xs[i], xs[i + 1]});
        return Domain::intervals(ivs);
    }
    case DomainKind::Box: return Domain::box(in.vec("lo"), in.vec("hi"));
    case DomainKind::Ball: return Domain::ball(in.vec("center"), in.num("radius"));
    case DomainKind::SlitBall: return Domain::slit_ball(in.vec("center"), in.num("radius"), in.num("gap", 0.0));
    case DomainKind::SlitInterval: return Domain::slit_interval();
    case DomainKind::HalfSpace:
        return Domain::half_space(in.integer("d", 1), in.integer("axis", 0), in.num("offset", 0.0), in.num("sign", 1.0));
    case DomainKind::FullSpace: return Domain::full_space(in.integer("d", 1));
    }
    throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

inline Record to_record(const Domain& d)
{
    Record r{{"kind", domain_kind_name(d.kind())}};
    switch (d.kind()) {
    case DomainKind::IntervalUnion: {
        std::string s;
        for (const auto& iv : d.intervals()) s += (s.empty() ? "" : ",") + format_double(iv.lo) + "," + format_double(iv.hi);
        r["intervals"] = s;
        break;
    }
    case DomainKind::Box:
        r["lo"] = vec_str(d.lower());
        r["hi"] = vec_str(d.upper());
        break;
    case DomainKind::SlitBall: r["gap"] = format_double(d.gap()); [[fallthrough]];
    case DomainKind::Ball:
        r["center"] = vec_str(d.center());
        r["radius"] = format_double(d.radius());
        break;
    case DomainKind::SlitInterval: break;
    case DomainKind::HalfSpace:
        r["d"] = std::to_string(d.dim());
        r["axis"] = std::to_string(d.axis());
        r["offset"] = format_double(d.offset());
        r["sign"] = format_double(d.sign());
        break;
    case DomainKind::FullSpace: r["d"] = std::to_string(d.dim()); break;
    }
    return r;
}

// ---- fields ----

/// u = scale * base(x - center) + offset. A piecewise record describes a single ball
/// region (center, radius, value) over a background.
inline Field field_from_record(const Record& r)
{
    check_keys(r, kFieldKeys, "field");
    detail::Reader in{r};
    const FieldKind kind = parse_field_kind(in.need("kind"));
    if (kind == FieldKind::Linear) {
        const Vec slope = in.vec("slope");
        return Field::linear(slope, 0.0).scaled(in.num("scale", 1.0)).shifted(in.num("offset", 0.0));
    }
    if (kind == FieldKind::PiecewiseConstant)
        return Field::ball_indicator(in.vec("center"), in.num("radius"), in.num("value", 1.0), in.num("background", 0.0))
            .scaled(in.num("scale", 1.0))
            .shifted(in.num("offset", 0.0));
    const int d = in.has("center") ? in.vec("center").dim() : in.integer("d", 1);
    Field f = Field::gaussian(d);
    switch (kind) {
    case FieldKind::Gaussian: break;
    case FieldKind::Tent: f = Field::tent(d); break;
    case FieldKind::SmoothBump: f = Field::smooth_bump(d, in.num("radius", 1.0)); break;
    case FieldKind::OddBump: f = Field::odd_bump(d, in.num("radius", 1.0)); break;
    case FieldKind::SignJump: f = Field::sign_jump(d, in.num("h", 0.5)); break;
    default: break;
    }
    if (in.has("center")) f = f.centered_at(in.vec("center"));
    return f.scaled(in.num("scale", 1.0)).shifted(in.num("offset", 0.0));
}

inline Record to_record(const Field& f)
{
    Record r{{"kind", field_kind_name(f.kind())}, {"d", std::to_string(f.dim())}};
    switch (f.kind()) {
    case FieldKind::Linear: r["slope"] = vec_str(f.slope()); break;
    case FieldKind::SmoothBump:
    case FieldKind::OddBump: r["radius"] = format_double(f.radius()); break;
    case FieldKind::SignJump: r["h"] = format_double(f.half_jump()); break;
    case FieldKind::PiecewiseConstant: {
        require(f.regions().size() == 1 && f.regions()[0].shape == Region::Shape::Ball,
                "to_record: only single-ball piecewise fields have a flat record");
        const auto& g = f.regions()[0];
        r.erase("d");
        r["center"] = vec_str(g.center);
        r["radius"] = format_double(g.radius);
        r["value"] = format_double(g.value);
        r["background"] = format_double(f.background());
        break;
    }
    default: break;
    }
    if (f.kind() != FieldKind::Linear && f.kind() != FieldKind::PiecewiseConstant && f.center().norm2() != 0.0) {
        r.erase("d");
        r["center"] = vec_str(f.center());
    }
    if (f.scale() != 1.0) r["scale"] = format_double(f.scale());
    if (f.offset() != 0.0) r["offset"] = format_double(f.offset());
    return r;
}

inline std::vector<std::string> to_tokens(const Record& r)
{
    std::vector<std::string> out;
    for (const auto& [k, v] : r) out.push_back(k + "=" + v);
    return out;
}

// ---- CSV ----

inline const char* kCsvHeader = "case_id,family,d,p,eps,value,stderr,n,target,mode,seed";

inline std::string csv_num(double x) { return std::isnan(x) ? "nan" : format_double(x); }

struct CsvRow {
    std::string case_id;
    std::string family;
    int d = 1;
    double p = 2.0;
    double eps = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    double target = std::numeric_limits<double>::quiet_NaN();
    std::string mode;
    std::uint64_t seed = 0;
};

inline void write_csv_row(std::ostream& os, const CsvRow& r)
{
    os << r.case_id << ',' << r.family << ',' << r.d << ',' << csv_num(r.p) << ',' << csv_num(r.eps) << ','
       << csv_num(r.value) << ',' << csv_num(r.std_error) << ',' << r.n << ',' << csv_num(r.target) << ',' << r.mode
       << ',' << r.seed;
}

/// One line per (case, grid parameter); the energy columns followed by abs_err and verdict.
inline void write_csv(std::ostream& os, const std::vector<SweepReport>& reports)
{
    os << kCsvHeader << ",abs_err,verdict\n";
    for (const auto& rep : reports)
        for (const auto& row : rep.rows) {
            write_csv_row(os, {rep.case_id, rep.family, rep.d, rep.p, row.param, row.value, row.std_error, row.n,
                               rep.target, rep.mode, rep.seed});
            os << ',' << csv_num(row.abs_err) << ',' << verdict_name(rep.verdict) << '\n';
        }
}

// ---- JSON ----

using nlohmann::json;

inline json num_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
inline double json_num(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

inline json to_json(const CsvRow& r)
{
    return json{{"case_id", r.case_id}, {"family", r.family},      {"d", r.d},           {"p", num_json(r.p)},
                {"eps", num_json(r.eps)}, {"value", num_json(r.value)}, {"stderr", num_json(r.std_error)},
                {"n", r.n},             {"target", num_json(r.target)}, {"mode", r.mode}, {"seed", r.seed}};
}

inline json to_json(const SweepReport& rep)
{
    json rows = json::array();
    for (const auto& w : rep.rows)
        rows.push_back({{"eps", num_json(w.param)},
                        {"value", num_json(w.value)},
                        {"stderr", num_json(w.std_error)},
                        {"n", w.n},
                        {"abs_err", num_json(w.abs_err)},
                        {"rel_err", num_json(w.rel_err)}});
    return json{{"case_id", rep.case_id},
                {"functional", rep.functional},
                {"family", rep.family},
                {"d", rep.d},
                {"p", num_json(rep.p)},
                {"target_kind", rep.target_kind},
                {"target", num_json(rep.target)},
                {"mode", rep.mode},
                {"seed", rep.seed},
                {"rows", rows},
                {"verdict", verdict_name(rep.verdict)},
                {"expected", verdict_name(rep.expected)},
                {"final_error", num_json(rep.final_error)},
                {"error", rep.error}};
}

inline SweepReport report_from_json(const json& j)
{
    SweepReport rep;
    rep.case_id = j.at("case_id").get<std::string>();
    rep.functional = j.at("functional").get<std::string>();
    rep.family = j.at("family").get<std::string>();
    rep.d = j.at("d").get<int>();
    rep.p = json_num(j.at("p"));
    rep.target_kind = j.at("target_kind").get<std::string>();
    rep.target = json_num(j.at("target"));
    rep.mode = j.at("mode").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& w : j.at("rows"))
        rep.rows.push_back({json_num(w.at("eps")), json_num(w.at("value")), json_num(w.at("stderr")),
                            w.at("n").get<std::int64_t>(), json_num(w.at("abs_err")), json_num(w.at("rel_err"))});
    rep.verdict = parse_verdict(j.at("verdict").get<std::string>());
    rep.expected = parse_verdict(j.at("expected").get<std::string>());
    rep.final_error = json_num(j.at("final_error"));
    rep.error = j.at("error").get<std::string>();
    return rep;
}

inline json to_json(const std::vector<SweepReport>& reports)
{
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return json{{"reports", arr}};
}

inline std::vector<SweepReport> reports_from_json(const json& j)
{
    std::vector<SweepReport> out;
    for (const auto& r : j.at("reports")) out.push_back(report_from_json(r));
    return out;
}

} // namespace bbm::io
