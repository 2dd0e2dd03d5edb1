#include "riskcap/network_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskcap/errors.hpp"

namespace riskcap::nn {
namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); }

Eigen::VectorXd json_vec(const json& j, std::size_t expected, const char* what) {
    auto v = j.get<std::vector<double>>();
    if (v.size() != expected) {
        throw InvalidInput(std::string("network json: field '") + what + "' has wrong length");
    }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

std::string to_json_string(const NetworkParams& p) {
    json doc;
    doc["format"] = "riskcap-network";
    doc["version"] = kNetworkFormatVersion;
    doc["input_dim"] = p.arch.input_dim;
    doc["hidden_sizes"] = p.arch.hidden_sizes;
    doc["hidden_activation"] = "tanh";
    doc["output_activation"] =
        p.arch.output == OutputActivation::exponential ? "exponential" : "identity";
    doc["batch_norm"] = p.arch.batch_norm;
    doc["input_shift"] = vec_json(p.input.shift);
    doc["input_scale"] = vec_json(p.input.scale);

    json layers = json::array();
    for (const auto& l : p.layers) {
        json jl;
        jl["rows"] = l.weight.rows();
        jl["cols"] = l.weight.cols();
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(l.weight.size()));
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
        jl["weights"] = w;
        jl["bias"] = vec_json(l.bias);
        if (l.norm) {
            jl["batch_norm"] = {{"gamma", vec_json(l.norm->gamma)},
                                {"beta", vec_json(l.norm->beta)},
                                {"running_mean", vec_json(l.norm->running_mean)},
                                {"running_var", vec_json(l.norm->running_var)},
                                {"momentum", kBatchNormMomentum},
                                {"epsilon", kBatchNormEpsilon}};
        }
        layers.push_back(std::move(jl));
    }
    doc["layers"] = std::move(layers);
    return doc.dump(2);
}

NetworkParams from_json_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("network json: ") + e.what());
    }
    if (doc.value("format", "") != "riskcap-network") throw InvalidInput("network json: unknown format");
    if (doc.value("version", 0) != kNetworkFormatVersion) {
        throw InvalidInput("network json: unsupported version");
    }

    try {
        NetworkParams p;
        p.arch.input_dim = doc.at("input_dim").get<std::size_t>();
        p.arch.hidden_sizes = doc.at("hidden_sizes").get<std::vector<std::size_t>>();
        const auto head = doc.at("output_activation").get<std::string>();
        if (head == "exponential") {
            p.arch.output = OutputActivation::exponential;
        } else if (head == "identity") {
            p.arch.output = OutputActivation::identity;
        } else {
            throw InvalidInput("network json: unknown output activation '" + head + "'");
        }
        p.arch.batch_norm = doc.at("batch_norm").get<bool>();
        p.arch.validate();
        p.input.shift = json_vec(doc.at("input_shift"), p.arch.input_dim, "input_shift");
        p.input.scale = json_vec(doc.at("input_scale"), p.arch.input_dim, "input_scale");

        const auto& layers = doc.at("layers");
        if (layers.size() != p.arch.layer_count()) throw InvalidInput("network json: layer count mismatch");
        for (std::size_t j = 0; j < layers.size(); ++j) {
            const auto& jl = layers[j];
            const auto rows = p.arch.layer_outputs(j);
            const auto cols = p.arch.layer_inputs(j);
            if (jl.at("rows").get<std::size_t>() != rows || jl.at("cols").get<std::size_t>() != cols) {
                throw InvalidInput("network json: layer shape mismatch");
            }
            Layer l;
            const Eigen::VectorXd w = json_vec(jl.at("weights"), rows * cols, "weights");
            l.weight.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            Eigen::Index k = 0;
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = w(k++);
            l.bias = json_vec(jl.at("bias"), rows, "bias");
            const bool hidden = j + 1 < layers.size();
            if (hidden && p.arch.batch_norm) {
                const auto& bn = jl.at("batch_norm");
                l.norm = BatchNorm{json_vec(bn.at("gamma"), rows, "gamma"),
                                   json_vec(bn.at("beta"), rows, "beta"),
                                   json_vec(bn.at("running_mean"), rows, "running_mean"),
                                   json_vec(bn.at("running_var"), rows, "running_var")};
            }
            p.layers.push_back(std::move(l));
        }
        if (!p.all_finite()) throw InvalidInput("network json: non-finite or invalid parameters");
        return p;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("network json: ") + e.what());
    }
}

void save_network(const NetworkParams& params, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write network file " + path.string());
    out << to_json_string(params) << '\n';
    if (!out) throw std::runtime_error("failed writing network file " + path.string());
}

NetworkParams load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read network file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

} // namespace riskcap::nn
