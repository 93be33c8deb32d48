#pragma once

#include <string>
#include <vector>

#include "crossgl/codegen.hpp"
#include "crossgl/ir.hpp"

namespace crossgl {

enum class SourceLanguage { CrossGL, GLSL, CUDA };

const char* source_language_name(SourceLanguage s);

// A filename maps either to an importable source language or to a
// target-only language (asymmetric support is deliberate).
struct LanguageId {
    bool importable = false;
    SourceLanguage source = SourceLanguage::CrossGL;
    TargetLanguage target = TargetLanguage::CrossGL;
};

// .cgl -> CrossGL, .glsl/.vert/.frag/.comp -> GLSL, .cu -> CUDA; the
// remaining target extensions map as target-only. Throws UnknownExtension.
LanguageId detect_language(const std::string& filename);

// Stage inference for GLSL inputs: .vert/.frag/.comp by extension, .glsl by
// content heuristics (gl_Position / compute layout / fragment output).
Stage infer_glsl_stage(const std::string& filename, const std::string& text);

struct GlslUnit {
    Stage stage = Stage::Fragment;
    std::string text;
    std::string file = "<glsl>";
};

struct ImportResult {
    ShaderModule module;
    std::vector<Diagnostic> warnings;
};

// Imports single-stage GLSL units into one module. in/out globals are
// re-packed into per-stage IO records (vertex `out` pairs with fragment `in`
// by name), clip-position writes become the designated record member, and
// units produced by this repository's GLSL backend restore their original
// entry points through the cgl_* naming contract. Throws UnsupportedConstruct
// (or ParseError) outside the supported subset.
ImportResult import_glsl(const std::vector<GlslUnit>& units,
                         const std::string& module_name = "Imported");

// Imports a CUDA translation unit: __global__ functions become compute-stage
// functions, __device__ functions become plain functions, host code is
// skipped with a warning. Thread-index expressions map to the reserved
// compute builtins. Throws UnsupportedConstruct outside the subset
// (__shared__, textures, dynamic parallelism).
ImportResult import_cuda(const std::string& source, const std::string& file = "<cuda>",
                         const std::string& module_name = "Imported");

} // namespace crossgl
