#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crossgl/ir.hpp"

namespace crossgl {

enum class TargetLanguage { CrossGL, GLSL, HLSL, Metal, CUDA, RustSrc };

// Canonical CLI spelling: crossgl, glsl, hlsl, metal, cuda, rust.
const char* target_name(TargetLanguage t);

struct OutputUnit {
    std::string suggested_filename;
    std::string target; // registry name of the generating backend
    std::string text;
};

// One registered code generator. `generate` expects a typechecked module;
// `stem` is the base name for suggested filenames.
struct Backend {
    std::string name;
    std::string description;
    std::function<std::vector<OutputUnit>(const ShaderModule&, const std::string& stem)>
        generate;
};

// The single source of truth the CLI enumerates. Frozen after startup
// registration; enumeration order is registration order.
class BackendRegistry {
  public:
    // Throws DuplicateBackend when the name is already taken.
    void register_backend(Backend backend);

    const Backend* find(const std::string& name) const;
    const std::vector<Backend>& backends() const { return backends_; }
    size_t size() const { return backends_.size(); }

    // Registry preloaded with the six built-in generators.
    static BackendRegistry with_builtins();

  private:
    std::vector<Backend> backends_;
};

// Target type spelling. Named types keep their emitted record name. Throws
// UnsupportedType where no mapping exists (sampler2D in Rust).
std::string map_type(const Type& t, TargetLanguage target);

// Generates output units for one built-in target. GLSL yields one unit per
// stage present; every other target yields a single unit.
std::vector<OutputUnit> generate(const ShaderModule& module, TargetLanguage target,
                                 const std::string& stem = "");

std::vector<OutputUnit> generate_crossgl(const ShaderModule& module, const std::string& stem);
std::vector<OutputUnit> generate_glsl(const ShaderModule& module, const std::string& stem);
std::vector<OutputUnit> generate_hlsl(const ShaderModule& module, const std::string& stem);
std::vector<OutputUnit> generate_metal(const ShaderModule& module, const std::string& stem);
std::vector<OutputUnit> generate_cuda(const ShaderModule& module, const std::string& stem);
std::vector<OutputUnit> generate_rust(const ShaderModule& module, const std::string& stem);

// CrossGL pretty-printed source of a module, the round-trip printer.
std::string print_crossgl(const ShaderModule& module);

// Stage file extensions: .vert/.frag/.comp for GLSL stages, one extension
// per remaining target.
std::string extension_for(TargetLanguage target, Stage stage = Stage::None);

} // namespace crossgl
