// Copyright 2026 The netqir-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "netqir/parser.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "netqir/validate.hpp"

namespace netqir {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$'; }
bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-'; }

const std::set<std::string> kTypeNames = {"void", "i1", "i32", "i64", "double"};

}  // namespace

LexResult lex(std::string_view text) {
    LexResult out;
    int line = 1;
    int col = 1;
    size_t i = 0;
    auto advance = [&](size_t n = 1) {
        for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Token::Kind kind, std::string s, SourceLoc loc) { out.tokens.push_back({kind, std::move(s), loc}); };

    while (i < text.size()) {
        const char c = text[i];
        const SourceLoc loc{line, col};
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        if (c == '@' || c == '%') {
            size_t j = i + 1;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            if (j == i + 1) {
                out.diagnostics.push_back({loc, Severity::Error, "lex-error", std::string("empty symbol after '") + c + "'"});
                advance();
                continue;
            }
            push(c == '@' ? Token::Kind::GlobalSymbol : Token::Kind::LocalSymbol, std::string(text.substr(i + 1, j - i - 1)),
                 loc);
            advance(j - i);
            continue;
        }
        if (c == '#') {
            size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i + 1) {
                out.diagnostics.push_back({loc, Severity::Error, "lex-error", "expected digits after '#'"});
                advance();
                continue;
            }
            push(Token::Kind::AttrRef, std::string(text.substr(i + 1, j - i - 1)), loc);
            advance(j - i);
            continue;
        }
        if (c == '"') {
            size_t j = i + 1;
            while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
            if (j >= text.size() || text[j] != '"') {
                out.diagnostics.push_back({loc, Severity::Error, "lex-error", "unterminated string"});
                advance(j - i);
                continue;
            }
            push(Token::Kind::String, std::string(text.substr(i + 1, j - i - 1)), loc);
            advance(j - i + 1);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            size_t j = i + 1;
            bool is_float = false;
            while (j < text.size()) {
                const char d = text[j];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    ++j;
                } else if (d == '.' || d == 'e' || d == 'E') {
                    is_float = true;
                    ++j;
                    if ((d == 'e' || d == 'E') && j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                } else {
                    break;
                }
            }
            push(is_float ? Token::Kind::Float : Token::Kind::Integer, std::string(text.substr(i, j - i)), loc);
            advance(j - i);
            continue;
        }
        if (text.substr(i, 3) == "...") {
            push(Token::Kind::Punct, "...", loc);
            advance(3);
            continue;
        }
        if (is_ident_start(c)) {
            size_t j = i + 1;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            if (j < text.size() && text[j] == ':') {
                push(Token::Kind::Label, word, loc);
                advance(j - i + 1);
                continue;
            }
            push(kTypeNames.count(word) ? Token::Kind::TypeName : Token::Kind::Keyword, word, loc);
            advance(j - i);
            continue;
        }
        if (std::string("(){},=*!").find(c) != std::string::npos) {
            push(Token::Kind::Punct, std::string(1, c), loc);
            advance();
            continue;
        }
        out.diagnostics.push_back({loc, Severity::Error, "lex-error", std::string("unexpected character '") + c + "'"});
        advance();
    }
    out.tokens.push_back({Token::Kind::End, "", SourceLoc{line, col}});
    return out;
}

namespace {

struct SyntaxError {
    SourceLoc loc;
    std::string message;
};

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Program parse_module() {
        Program program;
        std::vector<std::pair<size_t, std::string>> attr_refs;
        std::map<std::string, std::vector<std::string>> attr_groups;
        while (!at_end()) {
            const Token &t = peek();
            if (t.kind == Token::Kind::LocalSymbol) {
                parse_type_decl(program);
            } else if (is_keyword("define") || is_keyword("declare")) {
                std::string attr;
                program.functions.push_back(parse_function(attr));
                if (!attr.empty()) attr_refs.emplace_back(program.functions.size() - 1, attr);
            } else if (is_keyword("attributes")) {
                next();
                const Token id = expect(Token::Kind::AttrRef, "attribute group id");
                expect_punct("=");
                expect_punct("{");
                std::vector<std::string> items;
                while (!is_punct("}")) {
                    if (peek().kind != Token::Kind::String && peek().kind != Token::Kind::Keyword) {
                        fail(peek().loc, "expected attribute string");
                    }
                    items.push_back(next().text);
                }
                expect_punct("}");
                attr_groups[id.text] = std::move(items);
            } else {
                fail(t.loc, "expected top-level declaration, found '" + t.text + "'");
            }
        }
        for (const auto &[index, id] : attr_refs) {
            auto it = attr_groups.find(id);
            if (it == attr_groups.end()) continue;
            for (const auto &s : it->second) {
                if (s == "entry_point" || s == "EntryPoint") program.functions[index].entry_point = true;
            }
        }
        return program;
    }

  private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;

    const Token &peek(size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token &next() {
        const Token &t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool is_keyword(const char *kw, size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Keyword && peek(ahead).text == kw;
    }
    bool is_punct(const char *p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }

    [[noreturn]] void fail(SourceLoc loc, std::string message) { throw SyntaxError{loc, std::move(message)}; }

    std::string describe(const Token &t) const { return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"; }

    const Token &expect(Token::Kind kind, const char *what) {
        if (peek().kind != kind) fail(peek().loc, std::string("expected ") + what + ", found " + describe(peek()));
        return next();
    }
    void expect_punct(const char *p) {
        if (!is_punct(p)) fail(peek().loc, std::string("expected '") + p + "', found " + describe(peek()));
        next();
    }
    void expect_keyword(const char *kw) {
        if (!is_keyword(kw)) fail(peek().loc, std::string("expected '") + kw + "', found " + describe(peek()));
        next();
    }

    static std::optional<BaseType> opaque_from_name(const std::string &name) {
        for (BaseType b : {BaseType::Qubit, BaseType::Array, BaseType::Comm, BaseType::Group, BaseType::Result}) {
            if (name == opaque_name(b)) return b;
        }
        return std::nullopt;
    }

    void parse_type_decl(Program &program) {
        const Token &name = next();
        if (!opaque_from_name(name.text)) fail(name.loc, "unknown opaque type '%" + name.text + "'");
        expect_punct("=");
        expect_keyword("type");
        expect_keyword("opaque");
        program.opaque_types.push_back(name.text);
    }

    bool at_type() const {
        return peek().kind == Token::Kind::TypeName ||
               (peek().kind == Token::Kind::LocalSymbol && opaque_from_name(peek().text).has_value() &&
                peek(1).kind == Token::Kind::Punct && peek(1).text == "*");
    }

    Type parse_type() {
        const Token &t = next();
        Type type;
        if (t.kind == Token::Kind::TypeName) {
            if (t.text == "void") type.base = BaseType::Void;
            else if (t.text == "i1") type.base = BaseType::I1;
            else if (t.text == "i32") type.base = BaseType::I32;
            else if (t.text == "i64") type.base = BaseType::I64;
            else type.base = BaseType::Double;
        } else if (t.kind == Token::Kind::LocalSymbol) {
            auto b = opaque_from_name(t.text);
            if (!b) fail(t.loc, "unknown type '%" + t.text + "'");
            type.base = *b;
        } else {
            fail(t.loc, "expected type, found " + describe(t));
        }
        while (is_punct("*")) {
            next();
            ++type.pointer_depth;
        }
        if (type.pointer_depth == 0 && opaque_name(type.base)[0] != '\0') {
            fail(t.loc, "opaque type '%" + t.text + "' must be used through a pointer");
        }
        return type;
    }

    Function parse_function(std::string &attr) {
        Function f;
        f.loc = peek().loc;
        f.is_declaration = next().text == "declare";
        f.return_type = parse_type();
        f.name = expect(Token::Kind::GlobalSymbol, "function name").text;
        expect_punct("(");
        if (!is_punct(")")) {
            while (true) {
                if (is_punct("...")) {
                    next();
                    f.variadic = true;
                    break;
                }
                Param p;
                p.type = parse_type();
                if (peek().kind == Token::Kind::LocalSymbol) p.name = next().text;
                f.params.push_back(std::move(p));
                if (!is_punct(",")) break;
                next();
            }
        }
        expect_punct(")");
        if (peek().kind == Token::Kind::AttrRef) attr = next().text;
        if (f.is_declaration) return f;
        expect_punct("{");
        while (!is_punct("}")) {
            if (at_end()) fail(peek().loc, "unterminated function body");
            BasicBlock block;
            const Token &label = expect(Token::Kind::Label, "block label");
            block.label = label.text;
            block.loc = label.loc;
            while (peek().kind != Token::Kind::Label && !is_punct("}") && !at_end()) {
                block.instructions.push_back(parse_instruction());
            }
            f.blocks.push_back(std::move(block));
        }
        expect_punct("}");
        return f;
    }

    Value parse_value(const Type &type) {
        const Token &t = next();
        Value v;
        v.type = type;
        v.loc = t.loc;
        switch (t.kind) {
            case Token::Kind::LocalSymbol:
                v.kind = Value::Kind::Local;
                v.name = t.text;
                return v;
            case Token::Kind::Integer:
                v.kind = Value::Kind::Int;
                v.int_value = std::strtoll(t.text.c_str(), nullptr, 10);
                return v;
            case Token::Kind::Float:
                v.kind = Value::Kind::Float;
                v.float_value = std::strtod(t.text.c_str(), nullptr);
                return v;
            case Token::Kind::Keyword:
                if (t.text == "true" || t.text == "false") {
                    v.kind = Value::Kind::Int;
                    v.int_value = t.text == "true" ? 1 : 0;
                    return v;
                }
                if (t.text == "null") {
                    v.kind = Value::Kind::Address;
                    v.int_value = 0;
                    return v;
                }
                if (t.text == "inttoptr") {
                    expect_punct("(");
                    const Type int_type = parse_type();
                    if (!int_type.is_integer()) fail(t.loc, "inttoptr source must be an integer");
                    const Token &n = expect(Token::Kind::Integer, "address");
                    expect_keyword("to");
                    const Type target = parse_type();
                    expect_punct(")");
                    if (!(target == type)) fail(t.loc, "inttoptr target type does not match operand type");
                    v.kind = Value::Kind::Address;
                    v.int_value = std::strtoll(n.text.c_str(), nullptr, 10);
                    if (v.int_value < 0) fail(n.loc, "negative static address");
                    return v;
                }
                break;
            default: break;
        }
        fail(t.loc, "expected value, found " + describe(t));
    }

    Instruction parse_instruction() {
        Instruction inst;
        inst.loc = peek().loc;
        if (peek().kind == Token::Kind::LocalSymbol) {
            inst.result = next().text;
            expect_punct("=");
        }
        const Token &op = expect(Token::Kind::Keyword, "instruction");
        if (op.text == "call") {
            inst.opcode = Opcode::Call;
            inst.type = parse_type();
            const Token &callee = expect(Token::Kind::GlobalSymbol, "callee");
            inst.callee = callee.text;
            inst.loc = callee.loc;
            expect_punct("(");
            if (!is_punct(")")) {
                while (true) {
                    const Type t = parse_type();
                    inst.operands.push_back(parse_value(t));
                    if (!is_punct(",")) break;
                    next();
                }
            }
            expect_punct(")");
            if (is_punct(",")) {
                next();
                expect_punct("!");
                const Token &key = expect(Token::Kind::Keyword, "metadata key");
                if (key.text != "fold") fail(key.loc, "unknown call metadata '!" + key.text + "'");
                expect_punct("!");
                inst.fold = expect(Token::Kind::String, "fold gate name").text;
            }
        } else if (op.text == "icmp") {
            inst.opcode = Opcode::ICmp;
            const Token &pred = expect(Token::Kind::Keyword, "comparison predicate");
            if (pred.text == "eq") inst.pred = ICmpPred::Eq;
            else if (pred.text == "ne") inst.pred = ICmpPred::Ne;
            else if (pred.text == "slt") inst.pred = ICmpPred::Slt;
            else fail(pred.loc, "unsupported predicate '" + pred.text + "'");
            parse_binary_operands(inst);
        } else if (op.text == "add" || op.text == "sub") {
            inst.opcode = op.text == "add" ? Opcode::Add : Opcode::Sub;
            parse_binary_operands(inst);
        } else if (op.text == "br") {
            if (inst.result) fail(op.loc, "br does not produce a value");
            if (is_keyword("label")) {
                next();
                inst.opcode = Opcode::Br;
                inst.targets.push_back(expect(Token::Kind::LocalSymbol, "label").text);
            } else {
                inst.opcode = Opcode::CondBr;
                inst.type = parse_type();
                inst.operands.push_back(parse_value(inst.type));
                for (int k = 0; k < 2; ++k) {
                    expect_punct(",");
                    expect_keyword("label");
                    inst.targets.push_back(expect(Token::Kind::LocalSymbol, "label").text);
                }
            }
        } else if (op.text == "ret") {
            if (inst.result) fail(op.loc, "ret does not produce a value");
            inst.opcode = Opcode::Ret;
            inst.type = parse_type();
            if (inst.type.base != BaseType::Void || inst.type.is_pointer()) inst.operands.push_back(parse_value(inst.type));
        } else {
            fail(op.loc, "unknown instruction '" + op.text + "'");
        }
        if ((inst.opcode == Opcode::ICmp || inst.opcode == Opcode::Add || inst.opcode == Opcode::Sub) && !inst.result) {
            fail(op.loc, "result of '" + op.text + "' must be named");
        }
        return inst;
    }

    void parse_binary_operands(Instruction &inst) {
        inst.type = parse_type();
        inst.operands.push_back(parse_value(inst.type));
        expect_punct(",");
        inst.operands.push_back(parse_value(inst.type));
    }
};

}  // namespace

ParseResult parse(std::string_view text) {
    ParseResult result;
    LexResult lexed = lex(text);
    result.diagnostics = std::move(lexed.diagnostics);
    if (has_errors(result.diagnostics)) return result;
    try {
        Parser parser(std::move(lexed.tokens));
        result.program = parser.parse_module();
    } catch (const SyntaxError &e) {
        result.diagnostics.push_back({e.loc, Severity::Error, "syntax-error", e.message});
        return result;
    }
    auto semantic = validate(*result.program);
    result.diagnostics.insert(result.diagnostics.end(), semantic.begin(), semantic.end());
    return result;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

std::string print_value(const Value &v) {
    switch (v.kind) {
        case Value::Kind::Local: return "%" + v.name;
        case Value::Kind::Int:
            if (v.type.base == BaseType::I1 && !v.type.is_pointer()) return v.int_value ? "true" : "false";
            return std::to_string(v.int_value);
        case Value::Kind::Float: return format_double(v.float_value);
        case Value::Kind::Address:
            if (v.int_value == 0) return "null";
            return "inttoptr (i64 " + std::to_string(v.int_value) + " to " + to_string(v.type) + ")";
    }
    return "?";
}

const char *pred_name(ICmpPred p) {
    switch (p) {
        case ICmpPred::Eq: return "eq";
        case ICmpPred::Ne: return "ne";
        case ICmpPred::Slt: return "slt";
    }
    return "?";
}

}  // namespace

std::string print_instruction(const Instruction &inst) {
    std::ostringstream out;
    out << "  ";
    if (inst.result) out << "%" << *inst.result << " = ";
    switch (inst.opcode) {
        case Opcode::Call: {
            out << "call " << to_string(inst.type) << " @" << inst.callee << "(";
            for (size_t i = 0; i < inst.operands.size(); ++i) {
                if (i) out << ", ";
                out << to_string(inst.operands[i].type) << " " << print_value(inst.operands[i]);
            }
            out << ")";
            if (inst.fold) out << ", !fold !\"" << *inst.fold << "\"";
            break;
        }
        case Opcode::ICmp:
        case Opcode::Add:
        case Opcode::Sub:
            if (inst.opcode == Opcode::ICmp) out << "icmp " << pred_name(inst.pred) << " ";
            else out << (inst.opcode == Opcode::Add ? "add " : "sub ");
            out << to_string(inst.type) << " " << print_value(inst.operands[0]) << ", " << print_value(inst.operands[1]);
            break;
        case Opcode::Br: out << "br label %" << inst.targets[0]; break;
        case Opcode::CondBr:
            out << "br " << to_string(inst.type) << " " << print_value(inst.operands[0]) << ", label %" << inst.targets[0]
                << ", label %" << inst.targets[1];
            break;
        case Opcode::Ret:
            out << "ret " << to_string(inst.type);
            if (!inst.operands.empty()) out << " " << print_value(inst.operands[0]);
            break;
    }
    out << "\n";
    return out.str();
}

std::string print_signature(const Function &f) {
    std::ostringstream out;
    out << (f.is_declaration ? "declare " : "define ") << to_string(f.return_type) << " @" << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
        if (i) out << ", ";
        out << to_string(f.params[i].type);
        if (!f.is_declaration && !f.params[i].name.empty()) out << " %" << f.params[i].name;
    }
    if (f.variadic) out << (f.params.empty() ? "..." : ", ...");
    out << ")";
    if (f.entry_point) out << " #0";
    return out.str();
}

std::string print(const Program &program) {
    std::ostringstream out;
    bool any_entry = false;
    for (const auto &t : program.opaque_types) out << "%" << t << " = type opaque\n";
    bool previous_was_declaration = false;
    bool first = program.opaque_types.empty();
    for (const auto &f : program.functions) {
        any_entry = any_entry || f.entry_point;
        if (!first && !(f.is_declaration && previous_was_declaration)) out << "\n";
        first = false;
        out << print_signature(f);
        if (f.is_declaration) {
            out << "\n";
            previous_was_declaration = true;
            continue;
        }
        previous_was_declaration = false;
        out << " {\n";
        for (const auto &b : f.blocks) {
            out << b.label << ":\n";
            for (const auto &inst : b.instructions) out << print_instruction(inst);
        }
        out << "}\n";
    }
    if (any_entry) out << "\nattributes #0 = { \"entry_point\" }\n";
    return out.str();
}

}  // namespace netqir
