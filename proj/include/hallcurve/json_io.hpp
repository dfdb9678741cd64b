#pragma once

#include <json.hpp>

#include "hallcurve/cohp1.hpp"
#include "hallcurve/shuffle.hpp"
#include "hallcurve/witt.hpp"

namespace hc {

using Json = nlohmann::json;

// scalar grammar strings everywhere; printing is canonical

Json witt_to_json(const WittVector& w);
WittVector witt_from_json(const Json& j, const ScalarField& fld);

Json curve_to_json(const CurveData& X);
CurveData curve_from_json(const Json& j);

Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j);

Json localhall_to_json(const LocalHallElement& f);
LocalHallElement localhall_from_json(const Json& j, const ScalarField& fld);

std::string coherent_label(const CoherentP1& c);
CoherentP1 coherent_from_label(const std::string& label, long q);
Json hall_to_json(const HallElt& f);
HallElt hall_from_json(const Json& j, const ScalarField& fld, long q);

Json tensor2_to_json(const Tensor2& t);

Json kernel_to_json(const Kernel& k, const std::vector<int>& comps);
Kernel kernel_from_json(const Json& j, const ScalarField& fld);

Json shuffle_to_json(const ShuffleElement& e);
ShuffleElement shuffle_from_json(const Json& j, const ScalarField& fld);

Json series_to_json(const std::vector<Scalar>& s);

}  // namespace hc
