#pragma once

// model.json: RBF network serialization plus optional calibration block
//   {feature_scales, centers, widths, weights,
//    calibration?: {task_id, alpha, nu_rescale}, training?: {...}}

#include <fstream>
#include <string>

#include <json.hpp>

#include "saclat/io/csv.hpp"
#include "saclat/latency_model.hpp"
#include "saclat/rbf.hpp"

namespace saclat::io {

using nlohmann::json;

inline json to_json(const RBFNetwork& net) {
    json j;
    j["feature_scales"] = net.feature_scales;
    j["centers"] = net.centers;
    j["widths"] = net.widths;
    j["weights"] = net.weights;
    return j;
}

inline RBFNetwork network_from_json(const json& j) {
    RBFNetwork net;
    try {
        net.feature_scales = j.at("feature_scales").get<Point3>();
        net.centers = j.at("centers").get<std::vector<Point3>>();
        net.widths = j.at("widths").get<std::vector<double>>();
        net.weights = j.at("weights").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model.json: ") + e.what());
    }
    try {
        net.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("model.json: ") + e.what());
    }
    return net;
}

inline json to_json(const RateModel& model) {
    json j = to_json(model.network);
    if (model.calibration) {
        j["calibration"] = {{"task_id", model.calibration->task.id},
                            {"alpha", model.calibration->task.alpha},
                            {"nu_rescale", model.calibration->nu_rescale}};
    }
    return j;
}

inline RateModel model_from_json(const json& j) {
    RateModel m{network_from_json(j), std::nullopt};
    if (j.contains("calibration") && !j["calibration"].is_null()) {
        try {
            const auto& c = j["calibration"];
            latency::Calibration cal{{c.value("task_id", std::string("task")), c.at("alpha").get<double>()},
                                     c.value("nu_rescale", 1.0)};
            if (!(cal.task.alpha > 0.0) || !(cal.nu_rescale > 0.0)) {
                throw SchemaError("model.json: calibration alpha and nu_rescale must be positive");
            }
            m.calibration = std::move(cal);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("model.json calibration: ") + e.what());
        }
    }
    return m;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "': " + e.what());
    }
}

inline RateModel read_model_file(const std::string& path) {
    return model_from_json(read_json_file(path));
}

}  // namespace saclat::io
