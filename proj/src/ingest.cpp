#include "gmdet/ingest.hpp"

#include <fstream>
#include <sstream>

#include "gmdet/errors.hpp"
#include "gmdet/expr.hpp"

namespace gmdet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw Error(ErrorKind::MalformedInput, "at " + (where.empty() ? std::string("/") : where) + ": " + msg);
}

/// Runs f, prefixing any library or JSON error with the field path.
template <class F>
auto at_field(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MalformedInput) throw;
        std::string msg = e.what();
        const std::string tag = "malformed-input: ";
        if (msg.rfind(tag, 0) == 0) msg = msg.substr(tag.size());
        if (msg.rfind("at /", 0) == 0) throw;
        fail(where, msg);
    } catch (const json::exception& e) {
        fail(where, e.what());
    }
}

const json& require(const json& doc, const std::string& key, const std::string& where) {
    if (!doc.is_object()) fail(where, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end()) fail(where + "/" + key, "missing required field");
    return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) fail(where + "/" + std::to_string(i), "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

/// Numbers and strings both accepted for scalar entries.
std::string scalar_text(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(where, "expected a string or an integer");
}

std::size_t positive_size(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 1) fail(where, "expected a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

void check_square(const json& m, std::size_t r, const std::string& where) {
    if (!m.is_array() || m.size() != r) fail(where, "expected " + std::to_string(r) + " rows");
    for (std::size_t i = 0; i < r; ++i)
        if (!m[i].is_array() || m[i].size() != r)
            fail(where + "/" + std::to_string(i), "expected " + std::to_string(r) + " entries");
}

RMatrix rational_matrix(const json& m, std::size_t r, const std::string& where) {
    check_square(m, r, where);
    ParseContext ctx = free_context();
    RMatrix out(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            std::string w = where + "/" + std::to_string(i) + "/" + std::to_string(j);
            RF v = at_field(w, [&] { return parse_rf(scalar_text(m[i][j], w), ctx); });
            if (!v.is_constant()) fail(w, "expected a rational constant");
            out(i, j) = v;
        }
    return out;
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorKind::MalformedInput,
                    source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" +
                        e.what() + ")");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

ConnectionSpec load_spec(const json& doc) {
    if (!doc.is_object()) fail("", "expected an object");
    std::vector<std::string> base = string_list(require(doc, "base_vars", ""), "/base_vars");
    std::vector<std::string> params;
    if (doc.contains("params")) params = string_list(doc["params"], "/params");
    std::string fiber = "z";
    if (doc.contains("fiber")) {
        if (!doc["fiber"].is_string()) fail("/fiber", "expected a string");
        fiber = doc["fiber"].get<std::string>();
    }
    ScalarTower tower = at_field("/base_vars", [&] { return ScalarTower::make(base, params, fiber); });

    if (doc.contains("extension")) {
        const json& ext = doc["extension"];
        std::string gen = scalar_text(require(ext, "gen", "/extension"), "/extension/gen");
        std::string sq = scalar_text(require(ext, "square", "/extension"), "/extension/square");
        RF square = at_field("/extension/square", [&] { return parse_rf(sq, tower_context(tower)); });
        if (!square.is_polynomial() || square.contains(tower.fiber))
            fail("/extension/square", "must be a polynomial in the base variables and params");
        tower.ext = at_field("/extension", [&] { return make_extension(gen, square.p()); });
    }

    const std::size_t r = positive_size(require(doc, "rank", ""), "/rank");
    const json& matrix = require(doc, "matrix", "");
    check_square(matrix, r, "/matrix");
    ParseContext ctx = tower_context(tower);
    std::vector<std::vector<std::map<Var, RF>>> entries(r, std::vector<std::map<Var, RF>>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            std::string w = "/matrix/" + std::to_string(i) + "/" + std::to_string(j);
            const json& e = matrix[i][j];
            if (e.is_number_integer() && e.get<long long>() == 0) continue;
            std::string text = scalar_text(e, w);
            entries[i][j] = at_field(w, [&] { return parse_form(text, ctx); });
        }
    AbsoluteForm1 A = AbsoluteForm1::from_entries(entries, tower.fiber);

    std::optional<Divisor> D;
    if (doc.contains("divisor")) {
        const json& dj = doc["divisor"];
        if (!dj.is_array()) fail("/divisor", "expected an array");
        Divisor d;
        for (std::size_t k = 0; k < dj.size(); ++k) {
            std::string w = "/divisor/" + std::to_string(k);
            std::string pt = scalar_text(require(dj[k], "point", w), w + "/point");
            const json& mj = require(dj[k], "mult", w);
            if (!mj.is_number_integer() || mj.get<long long>() < 1) fail(w + "/mult", "expected a positive integer");
            Point p;
            if (pt == "infinity" || pt == "inf") {
                p = Point::infinity();
            } else {
                RF v = at_field(w + "/point", [&] { return parse_rf(pt, ctx); });
                if (v.contains(tower.fiber)) fail(w + "/point", "point must not involve the fiber coordinate");
                p = Point::at(v);
            }
            for (const auto& x : d)
                if (x.point == p) fail(w + "/point", "repeated point " + p.to_string());
            d.push_back({p, static_cast<int>(mj.get<long long>())});
        }
        D = d;
    }

    ConnectionSpec spec = at_field("/matrix", [&] { return make_spec(tower, A, D); });
    if (doc.contains("aux_factors")) {
        auto aux = string_list(doc["aux_factors"], "/aux_factors");
        for (std::size_t k = 0; k < aux.size(); ++k) {
            std::string w = "/aux_factors/" + std::to_string(k);
            RF f = at_field(w, [&] { return parse_rf(aux[k], ctx); });
            if (!f.is_polynomial()) fail(w, "expected a polynomial");
            spec.aux_factors.push_back(f.p());
        }
    }
    return spec;
}

FourierData load_fourier(const json& doc) {
    if (!doc.is_object()) fail("", "expected an object");
    FourierData d;
    d.rank = positive_size(require(doc, "rank", ""), "/rank");
    const json& poles = require(doc, "poles", "");
    if (!poles.is_array()) fail("/poles", "expected an array");
    ParseContext ctx = free_context();
    for (std::size_t p = 0; p < poles.size(); ++p) {
        std::string w = "/poles/" + std::to_string(p);
        FourierPole pole;
        std::string pt = scalar_text(require(poles[p], "point", w), w + "/point");
        pole.point = at_field(w + "/point", [&] { return parse_rf(pt, ctx); });
        if (!pole.point.is_constant()) fail(w + "/point", "expected a rational number");
        const json& g = require(poles[p], "g", w);
        if (!g.is_array() || g.empty()) fail(w + "/g", "expected a nonempty array of matrices");
        for (std::size_t i = 0; i < g.size(); ++i)
            pole.g.push_back(rational_matrix(g[i], d.rank, w + "/g/" + std::to_string(i)));
        d.poles.push_back(std::move(pole));
    }
    if (doc.contains("g_inf")) {
        const json& g = doc["g_inf"];
        if (!g.is_array()) fail("/g_inf", "expected an array of matrices");
        for (std::size_t k = 0; k < g.size(); ++k)
            d.g_inf.push_back(rational_matrix(g[k], d.rank, "/g_inf/" + std::to_string(k)));
    }
    at_field("", [&] { validate(d); });
    return d;
}

}  // namespace gmdet
