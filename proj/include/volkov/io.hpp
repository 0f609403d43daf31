#pragma once

// JSON documents for potentials, wave packets and mass families.
//
// Complex numbers are [re, im] pairs and spinors are arrays of four of
// them. Packets store their grid as parallel arrays (u, k2, k3, quad_weight,
// weight, chi0) so a document can be produced or inspected by hand.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "volkov/modes.hpp"
#include "volkov/potential.hpp"

namespace volkov::io {

using json = nlohmann::json;

/// Strict reader for one JSON object. Every accessor records the key as
/// consumed; finish() rejects keys nobody asked for. Failures throw
/// ConfigError naming the offending path.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path);

    bool has(const std::string& key) const;
    const json& child(const std::string& key);
    std::optional<std::reference_wrapper<const json>> optional_child(const std::string& key);

    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    std::int64_t integer(const std::string& key);
    std::int64_t integer_or(const std::string& key, std::int64_t fallback);
    bool boolean_or(const std::string& key, bool fallback);
    std::string string(const std::string& key);
    std::string string_or(const std::string& key, const std::string& fallback);
    std::vector<double> numbers(const std::string& key);
    std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback);

    std::string path(const std::string& key) const { return path_ + "." + key; }
    void finish() const;

private:
    const json& raw(const std::string& key);

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

double as_number(const json& j, const std::string& where);
std::vector<double> as_numbers(const json& j, const std::string& where);

/// {"kind": "zero" | "harmonic" | "pulse" | "tabulated", ...}. Tabulated
/// profiles are written inline as knot arrays; when reading, a "csv" path
/// (resolved against base_dir) is accepted instead.
json potential_to_json(const PlaneWavePotential& pot);
PlaneWavePotential potential_from_json(const json& j, const std::filesystem::path& base_dir = {});

json packet_to_json(const WavePacket& packet);
WavePacket packet_from_json(const json& j);

json mass_weight_to_json(const MassWeight& eta);
MassWeight mass_weight_from_json(const json& j);

json mass_family_to_json(const MassFamily& family);
MassFamily mass_family_from_json(const json& j);

/// A packet or family together with the potential it lives in.
struct PacketDocument {
    WavePacket packet;
    PlaneWavePotential potential;
};

struct MassFamilyDocument {
    MassFamily family;
    PlaneWavePotential potential;
};

json to_document(const PacketDocument& doc);
json to_document(const MassFamilyDocument& doc);
PacketDocument packet_document(const json& j, const std::filesystem::path& base_dir = {});
MassFamilyDocument mass_family_document(const json& j, const std::filesystem::path& base_dir = {});

json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& where);
json spinor_to_json(const Spinor& v);
Spinor spinor_from_json(const json& j, const std::string& where);

}  // namespace volkov::io
