#include "zdlab/io.hpp"

#include <fstream>

#include "zdlab/errors.hpp"

namespace zdlab {

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"command", command},
                          {"model_spec", model_spec},
                          {"numeric_config", numeric_config},
                          {"output_paths", output_paths},
                          {"tool_version", tool_version}};
}

void RunManifest::write(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file: " + path);
    os << content;
    if (!os) throw Error("failed writing output file: " + path);
}

}  // namespace zdlab
