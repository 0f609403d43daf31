#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "volkov/error.hpp"
#include "volkov/io.hpp"

using namespace volkov;
using namespace volkov::io;
using testing_support::complex_uniform;
using testing_support::random_spinor;

namespace {

WavePacket sample_packet() {
    const auto& pim = lightcone_operators().pi_minus;
    WavePacket p;
    p.mass = 1.25;
    p.nodes = tensor_grid(
        Axis::trapezoid(-1.0, -0.3, 3), Axis::trapezoid(-0.2, 0.2, 2), Axis::point(0.1),
        [](double, double, double) { return complex_uniform(); },
        [&](double, double, double) { return Spinor(pim * random_spinor()); });
    return p;
}

bool same_packet(const WavePacket& a, const WavePacket& b) {
    if (a.mass != b.mass || a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const auto& x = a.nodes[i];
        const auto& y = b.nodes[i];
        if (x.u != y.u || x.k2 != y.k2 || x.k3 != y.k3 || x.quad_weight != y.quad_weight || x.weight != y.weight ||
            x.chi0 != y.chi0)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("packets round-trip bit-exactly through text") {
    const WavePacket p = sample_packet();
    const json text = json::parse(to_document(PacketDocument{p, PlaneWavePotential::pulse(0.3, 1.5, 2.0)}).dump());
    const PacketDocument back = packet_document(text);
    CHECK(same_packet(p, back.packet));
    const auto* pulse = back.potential.as<PlaneWavePotential::Pulse>();
    REQUIRE(pulse != nullptr);
    CHECK(pulse->amplitude == 0.3);
    CHECK(pulse->frequency == 1.5);
    CHECK(pulse->width == 2.0);
}

TEST_CASE("mass families round-trip") {
    const auto eta = MassWeight::gaussian_bump(0.85, 1.15, 1.0, 0.1);
    const MassFamily fam = build_mass_family(0.8, 1.2, 5, eta, sample_packet().nodes);
    const json text = json::parse(to_document(MassFamilyDocument{fam, PlaneWavePotential::harmonic(0.2, 1.0)}).dump());
    const MassFamilyDocument back = mass_family_document(text);
    CHECK(back.family.masses == fam.masses);
    CHECK(back.family.mass_weights == fam.mass_weights);
    CHECK(back.family.eta.kind() == MassWeight::Kind::gaussian_bump);
    CHECK(back.family.eta(0.97) == eta(0.97));
    REQUIRE(back.family.packets.size() == fam.packets.size());
    for (std::size_t i = 0; i < fam.packets.size(); ++i) CHECK(same_packet(fam.packets[i], back.family.packets[i]));
}

TEST_CASE("potential descriptors") {
    CHECK(potential_from_json(json::parse(R"({"kind":"zero"})")).kind() == PlaneWavePotential::Kind::zero);
    const auto tab = potential_from_json(json::parse(R"({"kind":"tabulated","s":[0,1,2,3],"a2":[0,1,0,-1]})"));
    CHECK(tab.field(1.0).a2 == doctest::Approx(1.0));
    CHECK(tab.field(1.0).a3 == 0.0);
    const auto again = potential_from_json(potential_to_json(tab));
    CHECK(again.field(1.7).a2 == tab.field(1.7).a2);

    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"harmonic","amplitude":0.2})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"harmonic","amplitude":0.2,"frequency":0})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"zero","lambda":1})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"square"})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"harmonic","amplitude":"x","frequency":1})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"tabulated","s":[0,1,1],"a2":[0,1,2]})")), ConfigError);
    CHECK_THROWS_AS(potential_from_json(json::parse(R"({"kind":"tabulated","csv":"/nonexistent.csv"})")), ConfigError);
}

TEST_CASE("malformed packet documents are configuration errors") {
    json good = packet_to_json(sample_packet());
    CHECK_NOTHROW(packet_from_json(good));

    json short_weights = good;
    short_weights["weight"].erase(0);
    CHECK_THROWS_AS(packet_from_json(short_weights), ConfigError);

    json off_range = good;
    off_range["chi0"][0] = spinor_to_json(Spinor::Unit(0));
    CHECK_THROWS_AS(packet_from_json(off_range), ConfigError);

    json zero_u = good;
    zero_u["u"][0] = 0.0;
    CHECK_THROWS_AS(packet_from_json(zero_u), ConfigError);

    json extra = good;
    extra["colour"] = "red";
    CHECK_THROWS_AS(packet_from_json(extra), ConfigError);

    json missing = good;
    missing.erase("mass");
    CHECK_THROWS_AS(packet_from_json(missing), ConfigError);
}

TEST_CASE("strict object reader") {
    const json j = json::parse(R"({"a": 1.5, "n": 3, "flag": true, "name": "x", "xs": [1, 2]})");
    ObjectReader r(j, "cfg");
    CHECK(r.number("a") == 1.5);
    CHECK(r.integer("n") == 3);
    CHECK(r.boolean_or("flag", false));
    CHECK(r.string("name") == "x");
    CHECK(r.numbers("xs") == std::vector<double>{1, 2});
    CHECK(r.number_or("missing", 7.0) == 7.0);
    CHECK_NOTHROW(r.finish());

    ObjectReader partial(j, "cfg");
    partial.number("a");
    CHECK_THROWS_WITH_AS(partial.finish(), doctest::Contains("unknown key"), ConfigError);
    ObjectReader typed(j, "cfg");
    CHECK_THROWS_AS(typed.integer("a"), ConfigError);
    CHECK_THROWS_AS(typed.string("n"), ConfigError);
}
