#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>

namespace rtnn::bench {

using json = nlohmann::json;

namespace {

std::vector<std::vector<double>> read_frames(const json& doc, const char* field) {
    const auto it = doc.find(field);
    if (it == doc.end() || !it->is_array()) throw ConfigError(std::string("fixture: '") + field + "' must be an array");
    std::vector<std::vector<double>> frames;
    frames.reserve(it->size());
    for (std::size_t t = 0; t < it->size(); ++t) {
        const json& frame = (*it)[t];
        if (!frame.is_array())
            throw ConfigError(std::string("fixture: ") + field + "[" + std::to_string(t) + "] must be an array");
        std::vector<double> values;
        values.reserve(frame.size());
        for (const json& v : frame) {
            if (!v.is_number())
                throw ConfigError(std::string("fixture: ") + field + "[" + std::to_string(t) + "] holds a non-number");
            values.push_back(v.get<double>());
        }
        frames.push_back(std::move(values));
    }
    return frames;
}

} // namespace

IoFixture parse_fixture_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    } catch (const json::out_of_range& e) {
        throw ConfigError(std::string("fixture: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("fixture: top level must be an object");

    IoFixture fx;
    fx.input = read_frames(doc, "input");
    fx.expected_output = read_frames(doc, "expected_output");
    if (fx.input.size() != fx.expected_output.size())
        throw ConfigError("fixture: " + std::to_string(fx.input.size()) + " input frames but " +
                          std::to_string(fx.expected_output.size()) + " expected frames");

    const auto tol = doc.find("tolerance");
    if (tol == doc.end() || !tol->is_number()) throw ConfigError("fixture: 'tolerance' must be a number");
    fx.tolerance = tol->get<double>();
    if (!(fx.tolerance > 0.0) || !std::isfinite(fx.tolerance)) throw ConfigError("fixture: tolerance must be > 0");
    return fx;
}

IoFixture load_fixture_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw LoadError("cannot open fixture file " + path.string());
    const std::string text{std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
    return parse_fixture_json(text);
}

std::string serialize_fixture_json(const IoFixture& fixture) {
    json doc;
    doc["input"] = fixture.input;
    doc["expected_output"] = fixture.expected_output;
    doc["tolerance"] = fixture.tolerance;
    return doc.dump();
}

} // namespace rtnn::bench
