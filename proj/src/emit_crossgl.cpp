#include "crossgl/codegen.hpp"
#include "emitter_common.hpp"

namespace crossgl {

namespace {

struct CrossGLEmitter : CEmitter {
    using CEmitter::CEmitter;

    std::string type_name(const Type& t) override {
        return map_type(t, TargetLanguage::CrossGL);
    }

    std::string attr_str(const Attribute& a) {
        std::string s = "@" + a.name;
        if (!a.args.empty()) {
            s += "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                const AttrArg& arg = a.args[i];
                s += (i ? ", " : "");
                s += arg.is_int ? std::to_string(arg.int_value) : arg.text;
            }
            s += ")";
        }
        return s;
    }

    void attributes(const std::vector<Attribute>& attrs) {
        for (const auto& a : attrs) line(attr_str(a));
    }

    void global(const GlobalDecl& g) {
        attributes(g.attributes);
        std::string s;
        if (g.qualifier == GlobalQualifier::Uniform) s += "uniform ";
        if (g.qualifier == GlobalQualifier::Const) s += "const ";
        s += declare(g.type, g.name);
        if (g.init) s += " = " + expr(*g.init);
        line(s + ";");
    }

    void function(const FunctionDecl& f) {
        attributes(f.attributes);
        std::string head = declare(f.return_type, f.name) + "(";
        for (size_t i = 0; i < f.params.size(); ++i) {
            const Param& p = f.params[i];
            head += (i ? ", " : "");
            for (const auto& a : p.attributes) head += attr_str(a) + " ";
            head += declare(p.type, p.name);
        }
        head += ") {";
        line(head);
        body(f.body);
        line("}");
    }

    void run() {
        line("shader " + module.name + " {");
        ++depth;
        for (const auto& s : module.structs) {
            attributes(s.attributes);
            line("struct " + s.name + " {");
            ++depth;
            for (const auto& m : s.members) line(declare(m.type, m.name) + ";");
            --depth;
            line("}");
            blank();
        }
        for (const auto& g : module.globals) global(g);
        if (!module.globals.empty()) blank();
        // Functions keep their declaration order; consecutive functions of the
        // same stage share one stage block.
        size_t i = 0;
        while (i < module.functions.size()) {
            const FunctionDecl& f = module.functions[i];
            if (f.stage == Stage::None) {
                function(f);
                blank();
                ++i;
                continue;
            }
            line(std::string(stage_name(f.stage)) + " {");
            ++depth;
            while (i < module.functions.size() && module.functions[i].stage == f.stage) {
                function(module.functions[i]);
                ++i;
                if (i < module.functions.size() && module.functions[i].stage == f.stage)
                    blank();
            }
            --depth;
            line("}");
            blank();
        }
        --depth;
        line("}");
    }
};

} // namespace

std::string print_crossgl(const ShaderModule& module) {
    CrossGLEmitter emitter(module);
    emitter.run();
    return emitter.out.str();
}

std::vector<OutputUnit> generate_crossgl(const ShaderModule& module, const std::string& stem) {
    const std::string s = stem.empty() ? module.name : stem;
    return {{s + ".cgl", "crossgl", print_crossgl(module)}};
}

} // namespace crossgl
