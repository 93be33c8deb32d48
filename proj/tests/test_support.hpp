#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "crossgl/ir.hpp"
#include "crossgl/parser.hpp"
#include "crossgl/semantics.hpp"

// The two-stage UV passthrough shader used across the test suite.
inline const char* kImageProcessorSource = R"(
shader ImageProcessor {
    struct VertexInput {
        vec3 position;
        vec2 texCoord;
    }

    struct VertexOutput {
        vec2 uv;
        vec4 position;
    }

    vertex {
        VertexOutput main(VertexInput input) {
            VertexOutput output;
            output.uv = input.texCoord;
            output.position = vec4(input.position, 1.0);
            return output;
        }
    }

    fragment {
        vec4 main(vec2 uv) {
            return vec4(uv.x, uv.y, 0.5, 1.0);
        }
    }
}
)";

inline crossgl::ShaderModule parse_ok(const std::string& source,
                                      const std::string& file = "test.cgl") {
    return crossgl::parse_source(source, file);
}

// Parse + validate + typecheck, requiring zero diagnostics.
inline crossgl::ShaderModule compile_ok(const std::string& source,
                                        const std::string& file = "test.cgl") {
    crossgl::ShaderModule m = crossgl::parse_source(source, file);
    auto diags = crossgl::validate_program(m);
    std::string all;
    for (const auto& d : diags) all += d.str() + "\n";
    if (!diags.empty()) throw std::runtime_error("validate failed:\n" + all);
    diags = crossgl::typecheck_module(m);
    for (const auto& d : diags) all += d.str() + "\n";
    if (!diags.empty()) throw std::runtime_error("typecheck failed:\n" + all);
    return m;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path corpus_dir() { return CROSSGL_CORPUS_DIR; }
