#include "volkov/io.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "volkov/error.hpp"

namespace volkov::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(fmt::format("{}: {}", where, what));
}

const char* type_name(const json& j) { return j.type_name(); }

template <class Fn>
auto rethrow_as_config(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Strict readers

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, fmt::format("expected a number, found {}", type_name(j)));
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(where, "number is not finite");
    return x;
}

std::vector<double> as_numbers(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, fmt::format("expected an array of numbers, found {}", type_name(j)));
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], fmt::format("{}[{}]", where, i)));
    return out;
}

ObjectReader::ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, fmt::format("expected an object, found {}", type_name(j_)));
}

bool ObjectReader::has(const std::string& key) const { return j_.contains(key); }

const json& ObjectReader::raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) fail(path(key), "required key is missing");
    return j_.at(key);
}

const json& ObjectReader::child(const std::string& key) { return raw(key); }

std::optional<std::reference_wrapper<const json>> ObjectReader::optional_child(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return std::cref(j_.at(key));
}

double ObjectReader::number(const std::string& key) { return as_number(raw(key), path(key)); }

double ObjectReader::number_or(const std::string& key, double fallback) {
    used_.insert(key);
    return has(key) ? number(key) : fallback;
}

std::int64_t ObjectReader::integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(path(key), fmt::format("expected an integer, found {}", type_name(v)));
    return v.get<std::int64_t>();
}

std::int64_t ObjectReader::integer_or(const std::string& key, std::int64_t fallback) {
    used_.insert(key);
    return has(key) ? integer(key) : fallback;
}

bool ObjectReader::boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    const json& v = raw(key);
    if (!v.is_boolean()) fail(path(key), fmt::format("expected a boolean, found {}", type_name(v)));
    return v.get<bool>();
}

std::string ObjectReader::string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(path(key), fmt::format("expected a string, found {}", type_name(v)));
    return v.get<std::string>();
}

std::string ObjectReader::string_or(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    return has(key) ? string(key) : fallback;
}

std::vector<double> ObjectReader::numbers(const std::string& key) { return as_numbers(raw(key), path(key)); }

std::vector<double> ObjectReader::numbers_or(const std::string& key, std::vector<double> fallback) {
    used_.insert(key);
    return has(key) ? numbers(key) : std::move(fallback);
}

void ObjectReader::finish() const {
    for (const auto& [key, value] : j_.items())
        if (!used_.count(key)) fail(path(key), "unknown key");
}

// ---------------------------------------------------------------------------
// Scalars and spinors

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return {as_number(j, where), 0.0};
    if (!j.is_array() || j.size() != 2) fail(where, "expected a complex number [re, im]");
    return {as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]")};
}

json spinor_to_json(const Spinor& v) {
    json out = json::array();
    for (int i = 0; i < 4; ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

Spinor spinor_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) fail(where, "expected a spinor of four complex entries");
    Spinor v;
    for (int i = 0; i < 4; ++i) v[i] = complex_from_json(j[static_cast<std::size_t>(i)], fmt::format("{}[{}]", where, i));
    return v;
}

// ---------------------------------------------------------------------------
// Potentials

json potential_to_json(const PlaneWavePotential& pot) {
    json out;
    out["kind"] = pot.kind_name();
    if (const auto* h = pot.as<PlaneWavePotential::Harmonic>()) {
        out["amplitude"] = h->amplitude;
        out["frequency"] = h->frequency;
    } else if (const auto* p = pot.as<PlaneWavePotential::Pulse>()) {
        out["amplitude"] = p->amplitude;
        out["frequency"] = p->frequency;
        out["width"] = p->width;
    } else if (const auto* t = pot.as<PlaneWavePotential::Tabulated>()) {
        out["s"] = t->a2.knots();
        out["a2"] = t->a2.values();
        out["a3"] = t->a3.values();
    }
    return out;
}

PlaneWavePotential potential_from_json(const json& j, const std::filesystem::path& base_dir) {
    const std::string where = "potential";
    ObjectReader r(j, where);
    const std::string kind = r.string("kind");
    auto build = [&]() -> PlaneWavePotential {
        if (kind == "zero") return PlaneWavePotential::zero();
        if (kind == "harmonic") return PlaneWavePotential::harmonic(r.number("amplitude"), r.number("frequency"));
        if (kind == "pulse")
            return PlaneWavePotential::pulse(r.number("amplitude"), r.number("frequency"), r.number("width"));
        if (kind == "tabulated") {
            if (r.has("csv")) {
                if (r.has("s")) fail(where, "give either \"csv\" or inline knots, not both");
                std::filesystem::path p = r.string("csv");
                if (p.is_relative()) p = base_dir / p;
                return load_tabulated_csv(p);
            }
            return PlaneWavePotential::tabulated(r.numbers("s"), r.numbers("a2"), r.numbers_or("a3", {}),
                                                 static_cast<int>(r.integer_or("order", 3)));
        }
        fail(r.path("kind"), fmt::format("unknown potential kind '{}'", kind));
    };
    PlaneWavePotential pot = rethrow_as_config(where, build);
    r.finish();
    return pot;
}

// ---------------------------------------------------------------------------
// Packets

json packet_to_json(const WavePacket& packet) {
    json u = json::array(), k2 = json::array(), k3 = json::array(), q = json::array(), w = json::array(),
         chi = json::array();
    for (const auto& n : packet.nodes) {
        u.push_back(n.u);
        k2.push_back(n.k2);
        k3.push_back(n.k3);
        q.push_back(n.quad_weight);
        w.push_back(complex_to_json(n.weight));
        chi.push_back(spinor_to_json(n.chi0));
    }
    return {{"mass", packet.mass}, {"u", u}, {"k2", k2}, {"k3", k3}, {"quad_weight", q}, {"weight", w}, {"chi0", chi}};
}

WavePacket packet_from_json(const json& j) {
    const std::string where = "packet";
    ObjectReader r(j, where);
    WavePacket p;
    p.mass = r.number("mass");
    const auto u = r.numbers("u");
    const auto k2 = r.numbers("k2");
    const auto k3 = r.numbers("k3");
    const auto q = r.numbers("quad_weight");
    const json& w = r.child("weight");
    const json& chi = r.child("chi0");
    r.finish();
    const std::size_t n = u.size();
    if (k2.size() != n || k3.size() != n || q.size() != n || !w.is_array() || w.size() != n || !chi.is_array() ||
        chi.size() != n)
        fail(where, "grid and weight arrays must all have the same length");
    for (std::size_t i = 0; i < n; ++i) {
        p.nodes.push_back({u[i], k2[i], k3[i], q[i], complex_from_json(w[i], fmt::format("{}.weight[{}]", where, i)),
                           spinor_from_json(chi[i], fmt::format("{}.chi0[{}]", where, i))});
    }
    rethrow_as_config(where, [&] {
        p.validate();
        return 0;
    });
    return p;
}

// ---------------------------------------------------------------------------
// Mass families

json mass_weight_to_json(const MassWeight& eta) {
    switch (eta.kind()) {
        case MassWeight::Kind::bump: return {{"kind", "bump"}, {"lo", eta.lo()}, {"hi", eta.hi()}};
        case MassWeight::Kind::gaussian_bump:
            return {{"kind", "gaussian_bump"}, {"lo", eta.lo()}, {"hi", eta.hi()}, {"center", eta.center()},
                    {"width", eta.width()}};
        case MassWeight::Kind::box: return {{"kind", "box"}, {"lo", eta.lo()}, {"hi", eta.hi()}};
    }
    return {};
}

MassWeight mass_weight_from_json(const json& j) {
    const std::string where = "mass_weight";
    ObjectReader r(j, where);
    const std::string kind = r.string("kind");
    MassWeight eta = rethrow_as_config(where, [&] {
        if (kind == "bump") return MassWeight::bump(r.number("lo"), r.number("hi"));
        if (kind == "gaussian_bump")
            return MassWeight::gaussian_bump(r.number("lo"), r.number("hi"), r.number("center"), r.number("width"));
        if (kind == "box") return MassWeight::box(r.number("lo"), r.number("hi"));
        fail(r.path("kind"), fmt::format("unknown mass weight kind '{}'", kind));
    });
    r.finish();
    return eta;
}

json mass_family_to_json(const MassFamily& family) {
    json packets = json::array();
    for (const auto& p : family.packets) packets.push_back(packet_to_json(p));
    return {{"m_lo", family.m_lo},       {"m_hi", family.m_hi},
            {"eta", mass_weight_to_json(family.eta)}, {"masses", family.masses},
            {"mass_weights", family.mass_weights},    {"packets", packets}};
}

MassFamily mass_family_from_json(const json& j) {
    const std::string where = "mass_family";
    ObjectReader r(j, where);
    const double lo = r.number("m_lo");
    const double hi = r.number("m_hi");
    MassFamily fam{lo, hi, mass_weight_from_json(r.child("eta")), r.numbers("masses"), r.numbers("mass_weights"), {}};
    const json& packets = r.child("packets");
    r.finish();
    if (!packets.is_array()) fail(r.path("packets"), "expected an array of packets");
    for (const auto& p : packets) fam.packets.push_back(packet_from_json(p));
    rethrow_as_config(where, [&] {
        fam.validate();
        return 0;
    });
    return fam;
}

// ---------------------------------------------------------------------------
// Documents

json to_document(const PacketDocument& doc) {
    return {{"potential", potential_to_json(doc.potential)}, {"packet", packet_to_json(doc.packet)}};
}

json to_document(const MassFamilyDocument& doc) {
    return {{"potential", potential_to_json(doc.potential)}, {"mass_family", mass_family_to_json(doc.family)}};
}

PacketDocument packet_document(const json& j, const std::filesystem::path& base_dir) {
    ObjectReader r(j, "document");
    PacketDocument doc{packet_from_json(r.child("packet")), potential_from_json(r.child("potential"), base_dir)};
    r.finish();
    return doc;
}

MassFamilyDocument mass_family_document(const json& j, const std::filesystem::path& base_dir) {
    ObjectReader r(j, "document");
    MassFamilyDocument doc{mass_family_from_json(r.child("mass_family")), potential_from_json(r.child("potential"), base_dir)};
    r.finish();
    return doc;
}

}  // namespace volkov::io
