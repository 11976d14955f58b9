#include "dwpf/formula.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <variant>

#include "dwpf/errors.hpp"

namespace dwpf {

enum class Symbol { kAlpha, kBeta, kX, kRho };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };

struct Formula::Node {
  struct Constant {
    CScalar value;
  };
  struct Variable {
    Symbol symbol;
  };
  struct Negate {
    std::shared_ptr<const Node> operand;
  };
  struct Sqrt {
    std::shared_ptr<const Node> operand;
  };
  struct Binary {
    BinaryOp op;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  std::variant<Constant, Variable, Negate, Sqrt, Binary> data;
};

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

CScalar integer_power(CScalar base, long exponent) {
  if (exponent < 0) return 1.0 / integer_power(base, -exponent);
  CScalar result{1.0, 0.0};
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

CScalar eval(const Formula::Node& node, const FormulaSymbols& s) {
  using N = Formula::Node;
  return std::visit(
      [&](const auto& n) -> CScalar {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, N::Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, N::Variable>) {
          switch (n.symbol) {
            case Symbol::kAlpha: return s.alpha;
            case Symbol::kBeta: return s.beta;
            case Symbol::kX: return s.x;
            case Symbol::kRho: return s.rho;
          }
          return {};
        } else if constexpr (std::is_same_v<T, N::Negate>) {
          return -eval(*n.operand, s);
        } else if constexpr (std::is_same_v<T, N::Sqrt>) {
          return principal_sqrt(eval(*n.operand, s));
        } else {
          const CScalar a = eval(*n.lhs, s);
          const CScalar b = eval(*n.rhs, s);
          switch (n.op) {
            case BinaryOp::kAdd: return a + b;
            case BinaryOp::kSub: return a - b;
            case BinaryOp::kMul: return a * b;
            case BinaryOp::kDiv: return a / b;
            case BinaryOp::kPow: {
              const double rounded = std::round(b.real());
              if (b.imag() == 0.0 && rounded == b.real() && std::abs(rounded) <= 64.0) {
                return integer_power(a, static_cast<long>(rounded));
              }
              return std::pow(a, b);
            }
          }
          return {};
        }
      },
      node.data);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto node = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("formula '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static NodePtr make(Formula::Node node) {
    return std::make_shared<const Formula::Node>(std::move(node));
  }

  static NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    return make({Formula::Node::Binary{op, std::move(lhs), std::move(rhs)}});
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(BinaryOp::kAdd, lhs, term());
      } else if (accept('-')) {
        lhs = binary(BinaryOp::kSub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(BinaryOp::kMul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(BinaryOp::kDiv, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make({Formula::Node::Negate{unary()}});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary(BinaryOp::kPow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "alpha") return make({Formula::Node::Variable{Symbol::kAlpha}});
      if (word == "beta") return make({Formula::Node::Variable{Symbol::kBeta}});
      if (word == "x") return make({Formula::Node::Variable{Symbol::kX}});
      if (word == "rho") return make({Formula::Node::Variable{Symbol::kRho}});
      if (word == "sqrt") {
        expect('(');
        auto inner = expr();
        expect(')');
        return make({Formula::Node::Sqrt{inner}});
      }
      pos_ = start;
      fail("unknown symbol '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make({Formula::Node::Constant{CScalar{value, 0.0}}});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula Formula::parse(std::string_view text) {
  Formula f;
  f.root_ = Parser(text).parse();
  f.source_ = std::string(text);
  return f;
}

CScalar Formula::evaluate(const FormulaSymbols& symbols) const {
  if (!root_) return {};
  return eval(*root_, symbols);
}

}  // namespace dwpf
