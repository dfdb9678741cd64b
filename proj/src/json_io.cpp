#include "hallcurve/json_io.hpp"

#include <sstream>

namespace hc {

Json witt_to_json(const WittVector& w) {
    Json j;
    j["trunc"] = w.trunc;
    Json b = Json::array();
    for (const auto& c : w.b) b.push_back(c.to_string());
    j["b"] = b;
    if (w.rank) j["rank"] = *w.rank;
    return j;
}

WittVector witt_from_json(const Json& j, const ScalarField& fld) {
    if (!j.contains("trunc") || !j.contains("b"))
        throw parse_error("WittVector JSON needs \"trunc\" and \"b\"");
    int trunc = j["trunc"].get<int>();
    std::vector<Scalar> b;
    for (const auto& s : j["b"]) b.push_back(fld.parse(s.get<std::string>()));
    std::optional<int> rank;
    if (j.contains("rank")) rank = j["rank"].get<int>();
    return WittVector::from_poly(b, trunc, rank);
}

Json curve_to_json(const CurveData& X) {
    Json j;
    j["q"] = X.q;
    j["g"] = X.genus;
    Json p = Json::array();
    for (const auto& c : X.P) p.push_back(c.get_str());
    j["P"] = p;
    return j;
}

CurveData curve_from_json(const Json& j) {
    if (!j.contains("q")) throw parse_error("CurveData JSON needs \"q\"");
    CurveData X;
    X.q = j["q"].get<long>();
    X.genus = j.value("g", 0);
    X.P = {Int(1)};
    if (j.contains("P")) {
        X.P.clear();
        for (const auto& c : j["P"])
            X.P.emplace_back(c.is_string() ? Int(c.get<std::string>()) : Int(c.get<long>()));
    }
    if (X.P.empty() || X.P[0] != 1) throw parse_error("zeta numerator needs P(0) = 1");
    return X;
}

Json partition_to_json(const Partition& p) {
    Json j = Json::array();
    for (int x : p) j.push_back(x);
    return j;
}

Partition partition_from_json(const Json& j) {
    Partition p;
    for (const auto& x : j) p.push_back(x.get<int>());
    std::sort(p.begin(), p.end(), std::greater<int>());
    for (int x : p)
        if (x <= 0) throw parse_error("partition parts must be positive");
    return p;
}

Json localhall_to_json(const LocalHallElement& f) {
    Json j = Json::object();
    for (const auto& [lam, c] : f) j[partition_to_string(lam)] = c.to_string();
    return j;
}

LocalHallElement localhall_from_json(const Json& j, const ScalarField& fld) {
    LocalHallElement f;
    for (auto it = j.begin(); it != j.end(); ++it) {
        Json key = Json::parse(it.key());
        f[partition_from_json(key)] = fld.parse(it.value().get<std::string>());
    }
    return f;
}

std::string coherent_label(const CoherentP1& c) { return c.to_string(); }

CoherentP1 coherent_from_label(const std::string& label, long q) {
    Json j = Json::parse(label);
    CoherentP1 c;
    if (j.contains("bundle"))
        for (const auto& d : j["bundle"]) c.bundle.push_back(d.get<int>());
    std::sort(c.bundle.begin(), c.bundle.end(), std::greater<int>());
    if (j.contains("torsion"))
        for (auto it = j["torsion"].begin(); it != j["torsion"].end(); ++it) {
            PlaceP1 x = PlaceP1::parse(it.key(), q);
            Partition lam = partition_from_json(it.value());
            if (!lam.empty()) c.torsion[x] = lam;
        }
    return c;
}

Json hall_to_json(const HallElt& f) {
    Json j = Json::object();
    for (const auto& [k, c] : f) j[coherent_label(k)] = c.to_string();
    return j;
}

HallElt hall_from_json(const Json& j, const ScalarField& fld, long q) {
    HallElt f;
    for (auto it = j.begin(); it != j.end(); ++it)
        f[coherent_from_label(it.key(), q)] = fld.parse(it.value().get<std::string>());
    return f;
}

Json tensor2_to_json(const Tensor2& t) {
    Json j = Json::object();
    for (const auto& [k, c] : t)
        j[coherent_label(k.first) + " (x) " + coherent_label(k.second)] = c.to_string();
    return j;
}

Json kernel_to_json(const Kernel& k, const std::vector<int>& comps) {
    Json j = Json::object();
    for (int a : comps)
        for (int b : comps)
            if (k.has(a, b))
                j[std::to_string(a) + "," + std::to_string(b)] = k.entry(a, b).to_string();
    return j;
}

Kernel kernel_from_json(const Json& j, const ScalarField& fld) {
    Kernel k(fld);
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = it.key();
        auto comma = key.find(',');
        if (comma == std::string::npos) throw parse_error("kernel key must be \"i,j\"");
        int a = std::stoi(key.substr(0, comma)), b = std::stoi(key.substr(comma + 1));
        k.set(a, b, RationalFunction::parse(it.value().get<std::string>(), fld));
    }
    return k;
}

Json shuffle_to_json(const ShuffleElement& e) {
    Json j = Json::object();
    for (const auto& [comps, f] : e.pieces) {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < comps.size(); ++i) os << (i ? "," : "") << comps[i];
        os << ']';
        j[os.str()] = f.to_string();
    }
    return j;
}

ShuffleElement shuffle_from_json(const Json& j, const ScalarField& fld) {
    ShuffleElement e;
    for (auto it = j.begin(); it != j.end(); ++it) {
        Json key = Json::parse(it.key());
        std::vector<int> comps;
        for (const auto& x : key) comps.push_back(x.get<int>());
        std::sort(comps.begin(), comps.end());
        e.pieces[comps] = RationalFunction::parse(it.value().get<std::string>(), fld);
    }
    return e;
}

Json series_to_json(const std::vector<Scalar>& s) {
    Json j = Json::array();
    for (const auto& c : s) j.push_back(c.to_string());
    return j;
}

}  // namespace hc
