#include "pa/io.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace pa::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError(what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

int as_int(const json& j, const char* what) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == s.size() && !s.empty()) return v;
    }
    bad(std::string("expected an integer for ") + what);
}

std::vector<std::string> names_of(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be a list of names");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) bad(std::string(what) + " must be a list of names");
        out.push_back(x.get<std::string>());
    }
    return out;
}

json exps(MultiIndex m, int dim) { return m.to_vector(dim); }

MultiIndex exps_from(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) bad("exponent vectors must have one entry per generator");
    std::vector<int> e;
    for (const auto& x : j) {
        const int v = as_int(x, "an exponent");
        if (v < 0 || v > 255) bad("exponent out of range");
        e.push_back(v);
    }
    return MultiIndex::from_vector(e);
}

void check_meta(const json& j, const std::string& kind) {
    if (file_kind(j) != kind) bad("expected a '" + kind + "' file, got '" + file_kind(j) + "'");
}

json meta(const std::string& kind) {
    return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"conventions", conventions_json({}, CESign::Classical, Twist2Form::Reordered)}};
}

struct Slot {
    const char* name;
    int k, l;
    bool to_h;
};
constexpr Slot kComponents[] = {{"pi", 2, 0, false}, {"rho", 1, 1, true}, {"mu", 0, 2, true},
                                {"eta", 1, 1, false}, {"theta", 2, 0, true}};

json component_to_json(const ComponentMap& c, int dim) { return table_to_json(c.values, dim); }

ComponentMap component_from_json(const HopfAlgebra& H, const json& j, const Slot& s, int rg, int rh) {
    ComponentMap c{s.k, s.l, s.to_h, {}};
    const int n = s.k + s.l;
    const int rank = s.to_h ? rh : rg;
    if (!j.is_array()) bad(std::string("component '") + s.name + "' must be a list of entries");
    for (const auto& e : j) {
        Tuple t;
        for (const auto& x : field(e, "tuple")) t.push_back(as_int(x, "a tuple index"));
        if (static_cast<int>(t.size()) != n) bad(std::string("wrong tuple length in '") + s.name + "'");
        for (int i = 0; i < n; ++i) {
            const int bound = i < s.k ? rg : rh;
            if (t[i] < 0 || t[i] >= bound) bad(std::string("tuple index out of range in '") + s.name + "'");
        }
        if ((s.k == 2 && t[0] > t[1]) || (s.l == 2 && t[0] > t[1]))
            bad(std::string("tuples of '") + s.name + "' must be non-decreasing");
        PTElem v = pt_from_json(H, field(e, "value"), n, rank);
        if (c.values.count(t)) bad(std::string("duplicate tuple in '") + s.name + "'");
        if (!v.is_zero()) c.values.emplace(t, std::move(v));
    }
    return c;
}

}  // namespace

json rational_to_json(const Q& q) { return format_rational(q); }

Q rational_from_json(const json& j) {
    if (!j.is_string()) bad("rationals must be \"num/den\" strings");
    return parse_rational(j.get<std::string>());
}

json hopf_to_json(const HopfAlgebra& H) {
    const BaseLieAlgebra& b = H.base();
    json br = json::array();
    for (int i = 0; i < b.dim; ++i)
        for (int j = i + 1; j < b.dim; ++j) {
            if (b.bracket[i][j].empty()) continue;
            json cs = json::array();
            for (const auto& [k, c] : b.bracket[i][j]) cs.push_back({k, rational_to_json(c)});
            br.push_back({{"i", i}, {"j", j}, {"coeffs", cs}});
        }
    return {{"generators", b.names}, {"brackets", br}};
}

HopfPtr hopf_from_json(const json& j) {
    const auto gens = names_of(field(j, "generators"), "generators");
    if (gens.empty() || gens.size() > 8) bad("between 1 and 8 generators are supported");
    BaseLieAlgebra b = BaseLieAlgebra::abelian(static_cast<int>(gens.size()), gens);
    if (j.contains("brackets")) {
        for (const auto& e : j.at("brackets")) {
            const int i = as_int(field(e, "i"), "i"), k = as_int(field(e, "j"), "j");
            if (i < 0 || k < 0 || i >= b.dim || k >= b.dim || i == k) bad("bracket indices out of range");
            std::vector<std::pair<int, Q>> cs;
            for (const auto& c : field(e, "coeffs")) {
                if (!c.is_array() || c.size() != 2) bad("bracket coefficients are [index, \"num/den\"] pairs");
                const int t = as_int(c[0], "a bracket index");
                if (t < 0 || t >= b.dim) bad("bracket index out of range");
                cs.emplace_back(t, rational_from_json(c[1]));
            }
            if (i < k)
                b.set_bracket(i, k, cs);
            else {
                for (auto& [t, c] : cs) c = -c;
                b.set_bracket(k, i, cs);
            }
        }
    }
    b.validate();
    static std::mutex mu;
    static std::map<std::string, HopfPtr> cache;
    const std::string key = hopf_to_json(HopfAlgebra(b)).dump();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_shared<HopfAlgebra>(b)).first;
    return it->second;
}

json module_to_json(const FreeModule& M) { return {{"name", M.name}, {"basis", M.basis}}; }

ModulePtr module_from_json(const HopfPtr& H, const json& j) {
    if (!field(j, "name").is_string()) bad("module name must be a string");
    const std::string name = j.at("name").get<std::string>();
    const auto basis = names_of(field(j, "basis"), "basis");
    static std::mutex mu;
    static std::map<std::tuple<const HopfAlgebra*, std::string, std::vector<std::string>>, ModulePtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(H.get(), name, basis);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_module(H, name, basis)).first;
    return it->second;
}

json pt_to_json(const PTElem& e, int dim) {
    json out = json::array();
    for (const auto& [k, c] : e.terms) {
        json slots = json::array();
        for (int i = 0; i + 1 < e.arity; ++i) slots.push_back(exps(k.slot(i), dim));
        out.push_back({{"slots", slots}, {"coeff", exps(k.coeff(), dim)}, {"basis", k.basis()}, {"c", rational_to_json(c)}});
    }
    return out;
}

PTElem pt_from_json(const HopfAlgebra& H, const json& j, int arity, int rank) {
    if (!j.is_array()) bad("a pseudotensor value is a list of terms");
    std::vector<std::pair<TKey, Q>> raw;
    for (const auto& t : j) {
        const json& slots = field(t, "slots");
        if (!slots.is_array() || (static_cast<int>(slots.size()) != arity - 1 && static_cast<int>(slots.size()) != arity))
            bad("a term of arity " + std::to_string(arity) + " has " + std::to_string(arity - 1) + " or " +
                std::to_string(arity) + " slots");
        TKey k = make_key(arity);
        for (size_t i = 0; i < slots.size(); ++i) k.set_slot(static_cast<int>(i), exps_from(slots[i], H.dim()));
        k.set_coeff(t.contains("coeff") ? exps_from(t.at("coeff"), H.dim()) : MultiIndex());
        const int b = as_int(field(t, "basis"), "basis");
        if (b < 0 || b >= rank) bad("basis index out of range");
        k.set_basis(b);
        raw.emplace_back(k, rational_from_json(field(t, "c")));
    }
    return canonicalize(H, raw, arity);
}

json helem_to_json(const HElem& h, int dim) {
    json out = json::array();
    for (const auto& [m, c] : h.terms) out.push_back({{"mono", exps(m, dim)}, {"c", rational_to_json(c)}});
    return out;
}

HElem helem_from_json(const HopfAlgebra& H, const json& j) {
    if (!j.is_array()) bad("an H-element is a list of {mono, c} terms");
    std::vector<HTerm> terms;
    for (const auto& t : j) terms.emplace_back(exps_from(field(t, "mono"), H.dim()), rational_from_json(field(t, "c")));
    return HElem::from_terms(terms);
}

json table_to_json(const ValueTable& t, int dim) {
    json out = json::array();
    for (const auto& [tuple, v] : t)
        if (!v.is_zero()) out.push_back({{"tuple", tuple}, {"value", pt_to_json(v, dim)}});
    return out;
}

ValueTable table_from_json(const HopfAlgebra& H, const json& j, int arity, int rank, int tuple_bound) {
    if (!j.is_array()) bad("a value table is a list of {tuple, value} entries");
    ValueTable out;
    for (const auto& e : j) {
        Tuple t;
        for (const auto& x : field(e, "tuple")) {
            const int v = as_int(x, "a tuple index");
            if (v < 0 || v >= tuple_bound) bad("tuple index out of range");
            t.push_back(v);
        }
        if (static_cast<int>(t.size()) != arity) bad("tuple length differs from the arity");
        if (out.count(t)) bad("duplicate tuple");
        PTElem v = pt_from_json(H, field(e, "value"), arity, rank);
        if (!v.is_zero()) out.emplace(t, std::move(v));
    }
    return out;
}

json conventions_json(const PCFlags& pc, CESign ce, Twist2Form tw) {
    return {{"pc", pc.str()}, {"ce_sign", to_string(ce)}, {"twist2", tw == Twist2Form::Reordered ? "reordered" : "printed"}};
}

std::string file_kind(const json& j) {
    const json& m = field(j, "meta");
    if (!field(m, "schema_version").is_string() || m.at("schema_version").get<std::string>() != kSchemaVersion)
        bad(std::string("unsupported schema_version (expected \"") + kSchemaVersion + "\")");
    if (!field(m, "kind").is_string()) bad("meta.kind must be a string");
    return m.at("kind").get<std::string>();
}

json structure_to_json(const QuasiTwilled& S) {
    const int dim = S.H().dim();
    json maps = json::object();
    maps["pi"] = component_to_json(pi_map(S), dim);
    maps["rho"] = component_to_json(rho_map(S), dim);
    maps["mu"] = component_to_json(mu_map(S), dim);
    maps["eta"] = component_to_json(eta_map(S), dim);
    maps["theta"] = component_to_json(theta_map(S), dim);
    return {{"meta", meta("quasi_twilled")},
            {"name", S.name},
            {"hopf", hopf_to_json(S.H())},
            {"modules", {{"g", module_to_json(*S.g)}, {"h", module_to_json(*S.h)}}},
            {"maps", maps}};
}

QuasiTwilled structure_from_json(const json& j, bool validate) {
    check_meta(j, "quasi_twilled");
    HopfPtr H = hopf_from_json(field(j, "hopf"));
    const json& mods = field(j, "modules");
    ModulePtr g = module_from_json(H, field(mods, "g")), h = module_from_json(H, field(mods, "h"));
    const json& maps = field(j, "maps");
    std::vector<ComponentMap> cs;
    for (const Slot& s : kComponents)
        cs.push_back(maps.contains(s.name) ? component_from_json(*H, maps.at(s.name), s, g->rank(), h->rank())
                                           : ComponentMap{s.k, s.l, s.to_h, {}});
    const std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    QuasiTwilled S = make_quasi_twilled(g, h, cs[0], cs[1], cs[2], cs[3], cs[4], name);
    if (validate) {
        const PCReport r = check_pc(S);
        if (!r.pass()) {
            std::string labels;
            for (int k = 1; k <= 8; ++k)
                if (!r.label_pass(k)) labels += " PC" + std::to_string(k);
            throw ValidationError("structure '" + name + "' fails" + labels);
        }
    }
    return S;
}

json algebra_to_json(const LiePseudoalgebra& L) {
    const int dim = L.M->H->dim();
    return {{"meta", meta("algebra")},
            {"hopf", hopf_to_json(*L.M->H)},
            {"module", module_to_json(*L.M)},
            {"bracket", table_to_json(L.bracket.sorted_values(), dim)}};
}

LiePseudoalgebra algebra_from_json(const json& j, bool validate) {
    check_meta(j, "algebra");
    HopfPtr H = hopf_from_json(field(j, "hopf"));
    ModulePtr M = module_from_json(H, field(j, "module"));
    ValueTable t = table_from_json(*H, field(j, "bracket"), 2, M->rank(), M->rank());
    for (const auto& [tuple, v] : t)
        if (tuple[0] > tuple[1]) bad("bracket tuples must be non-decreasing");
    LiePseudoalgebra L{M, Cochain::from_values(2, M, M, t)};
    if (validate) {
        const CheckReport r = check_lie(L);
        if (!r.pass()) throw ValidationError("algebra fails " + r.failures.front().label);
    }
    return L;
}

json map_to_json(const HModuleMap& m, std::optional<MapKind> kind) {
    const int dim = m.from->H->dim();
    json rows = json::array();
    for (const auto& row : m.matrix) {
        json r = json::array();
        for (const auto& h : row) r.push_back(helem_to_json(h, dim));
        rows.push_back(r);
    }
    json out = {{"meta", meta("map")},
                {"hopf", hopf_to_json(*m.from->H)},
                {"from", module_to_json(*m.from)},
                {"to", module_to_json(*m.to)},
                {"matrix", rows}};
    if (kind) out["type"] = *kind == MapKind::TypeI ? "I" : "II";
    return out;
}

std::optional<MapKind> map_kind_of(const json& j) {
    if (!j.contains("type")) return std::nullopt;
    const json& t = j.at("type");
    if (t == "I") return MapKind::TypeI;
    if (t == "II") return MapKind::TypeII;
    bad("map type must be \"I\" or \"II\"");
}

HModuleMap map_from_json(const json& j, const ModulePtr& from, const ModulePtr& to) {
    check_meta(j, "map");
    HopfPtr H = hopf_from_json(field(j, "hopf"));
    if (hopf_to_json(*H) != hopf_to_json(*from->H)) bad("map and structure are over different Hopf algebras");
    const json& rows = field(j, "matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != from->rank())
        bad("map matrix needs one row per basis element of the source (" + std::to_string(from->rank()) + ")");
    HModuleMap m = HModuleMap::zero(from, to);
    for (int i = 0; i < from->rank(); ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != to->rank())
            bad("map matrix needs one column per basis element of the target (" + std::to_string(to->rank()) + ")");
        for (int k = 0; k < to->rank(); ++k) m.matrix[i][k] = helem_from_json(*from->H, rows[i][k]);
    }
    return m;
}

json cochain_to_json(const Cochain& f) {
    const int dim = f.source->H->dim();
    return {{"meta", meta("cochain")},
            {"hopf", hopf_to_json(*f.source->H)},
            {"source", module_to_json(*f.source)},
            {"target", module_to_json(*f.target)},
            {"arity", f.arity},
            {"skew", f.skew},
            {"values", table_to_json(f.skew ? f.sorted_values() : f.values, dim)}};
}

Cochain cochain_from_json(const json& j, const ModulePtr& source, const ModulePtr& target) {
    check_meta(j, "cochain");
    HopfPtr H = hopf_from_json(field(j, "hopf"));
    ModulePtr s = module_from_json(H, field(j, "source")), t = module_from_json(H, field(j, "target"));
    auto resolve = [&](const ModulePtr& given, const ModulePtr& read, const char* what) {
        if (!given) return read;
        if (given->basis != read->basis || hopf_to_json(*given->H) != hopf_to_json(*H))
            bad(std::string("cochain ") + what + " does not match the structure's module");
        return given;
    };
    s = resolve(source, s, "source");
    t = resolve(target, t, "target");
    const int p = as_int(field(j, "arity"), "arity");
    if (p < 0 || p + 1 > kMaxArity) bad("cochain arity out of range");
    const bool skew = !j.contains("skew") || j.at("skew").get<bool>();
    ValueTable v = table_from_json(*H, field(j, "values"), p, t->rank(), s->rank());
    if (skew) {
        for (const auto& [tuple, val] : v)
            if (!std::is_sorted(tuple.begin(), tuple.end())) bad("skew cochains list non-decreasing tuples only");
        return Cochain::from_values(p, s, t, v);
    }
    return Cochain::from_full(p, s, t, v);
}

json ingredients_to_json(const Ingredients& in) {
    const HopfAlgebra& H = *in.g.M->H;
    const int dim = H.dim();
    auto alg = [&](const LiePseudoalgebra& L) {
        return json{{"module", module_to_json(*L.M)}, {"bracket", table_to_json(L.bracket.sorted_values(), dim)}};
    };
    json out = {{"meta", meta("ingredients")},
                {"operator", to_string(in.kind)},
                {"p", rational_to_json(in.p)},
                {"hopf", hopf_to_json(H)},
                {"g", alg(in.g)},
                {"rho", table_to_json(in.rho.values, dim)},
                {"eta", table_to_json(in.eta.values, dim)},
                {"omega", table_to_json(in.omega.values, dim)}};
    if (in.h.M) out["h"] = alg(in.h);
    return out;
}

Ingredients ingredients_from_json(const json& j) {
    check_meta(j, "ingredients");
    HopfPtr H = hopf_from_json(field(j, "hopf"));
    Ingredients in;
    if (!field(j, "operator").is_string()) bad("operator must be a string");
    in.kind = operator_kind_from_string(j.at("operator").get<std::string>());
    in.p = j.contains("p") ? rational_from_json(j.at("p")) : Q(0);
    auto alg = [&](const json& a) {
        ModulePtr M = module_from_json(H, field(a, "module"));
        ValueTable t = a.contains("bracket") ? table_from_json(*H, a.at("bracket"), 2, M->rank(), M->rank()) : ValueTable{};
        return LiePseudoalgebra{M, Cochain::from_values(2, M, M, t)};
    };
    in.g = alg(field(j, "g"));
    in.h = j.contains("h") ? alg(j.at("h")) : LiePseudoalgebra{};
    const int rg = in.g.M->rank(), rh = in.h.M ? in.h.M->rank() : rg;  // single-module kinds act on g itself
    in.rho = component_from_json(*H, j.value("rho", json::array()), {"rho", 1, 1, true}, rg, rh);
    // η in the h ⊗ g orientation: tuples (h index, g index), values in g.
    in.eta = {1, 1, false, {}};
    if (j.contains("eta")) in.eta.values = table_from_json(*H, j.at("eta"), 2, rg, std::max(rg, rh));
    for (const auto& [t, v] : in.eta.values)
        if (t[0] >= rh || t[1] >= rg) bad("eta tuples are (h index, g index)");
    in.omega = component_from_json(*H, j.value("omega", json::array()), {"omega", 2, 0, true}, rg, rh);
    return in;
}

json read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) bad("cannot read '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        bad("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) bad("cannot write '" + path + "'");
    f << dump(j);
    if (!f) bad("cannot write '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace pa::io
