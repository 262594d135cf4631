#include "radar/simulation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <thread>

#include "radar/rng.hpp"

namespace radar {

const char* sim_mode_name(SimMode mode) {
  switch (mode) {
    case SimMode::Auto: return "auto";
    case SimMode::FullRetention: return "full";
    case SimMode::Streaming: return "streaming";
  }
  return "?";
}

namespace {

using Op = CompiledModel::Op;
using Node = CompiledModel::Node;

// Runs per evaluation window. Windowing keeps buffer memory bounded at large
// N; draws are pure functions of the absolute run index, so window splits
// never change a value.
constexpr size_t kEvalWindow = 1 << 16;

double fold_literal(const Expr& expr) {
  if (const auto* num = std::get_if<NumberLit>(&expr.node)) return num->value;
  if (const auto* neg = std::get_if<NegExpr>(&expr.node)) return -fold_literal(*neg->operand);
  const auto& bin = std::get<BinaryExpr>(expr.node);
  double l = fold_literal(*bin.lhs);
  double r = fold_literal(*bin.rhs);
  switch (bin.op) {
    case BinOp::Add: return l + r;
    case BinOp::Sub: return l - r;
    case BinOp::Mul: return l * r;
    case BinOp::Div: return l / r;
    case BinOp::Pow: return std::pow(l, r);
  }
  return 0;
}

inline double apply_scalar(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    default: return std::pow(a, b);
  }
}

inline double transform_unit(DistKind kind, double u, double a, double b, double c) {
  switch (kind) {
    case DistKind::Deterministic: return a;
    case DistKind::Normal: return rng::normal_from_unit(u, a, b);
    case DistKind::Uniform: return rng::uniform_from_unit(u, a, b);
    case DistKind::Triangular: return rng::triangular_from_unit(u, a, b, c);
    case DistKind::Exponential: return rng::exponential_from_unit(u, a);
  }
  return a;
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    default: return "?";
  }
}

}  // namespace

CompiledModel::CompiledModel(const SemanticModel& model) {
  building_ = &model;
  nodes_.reserve(model.node_count());
  var_root_.assign(model.num_vars(), -1);
  var_names_.reserve(model.num_vars());
  for (size_t slot = 0; slot < model.num_vars(); ++slot) {
    var_names_.push_back(model.var(slot).name);
  }
  decision_options_.assign(model.decisions().size(), {});
  decision_names_.reserve(model.decisions().size());
  for (const auto& d : model.decisions()) decision_names_.push_back(d.name);

  for (size_t slot = 0; slot < model.num_vars(); ++slot) {
    int p = model.parameter_of_var(slot);
    param_root_ = p >= 0 ? model.var(slot).def : nullptr;
    param_stream_ = p >= 0 ? model.parameters()[static_cast<size_t>(p)].stream_id : 0;
    var_root_[slot] = lower(*model.var(slot).def);
  }
  param_root_ = nullptr;

  objectives_.reserve(model.objectives().size());
  for (const auto& obj : model.objectives()) {
    objectives_.push_back(Objective{obj.name, obj.direction, obj.target_slot});
  }
  building_ = nullptr;

  var_static_.assign(var_root_.size(), 0);
  std::vector<int8_t> state(var_root_.size(), -1);
  for (size_t slot = 0; slot < var_root_.size(); ++slot) {
    var_static_[slot] = var_dynamic(slot, state) ? 0 : 1;
  }
}

bool CompiledModel::var_dynamic(size_t slot, std::vector<int8_t>& state) {
  if (state[slot] >= 0) return state[slot] != 0;
  bool dyn = subtree_dynamic(var_root_[slot], state);
  state[slot] = dyn ? 1 : 0;
  return dyn;
}

bool CompiledModel::subtree_dynamic(int32_t id, std::vector<int8_t>& state) {
  const Node& n = nodes_[static_cast<size_t>(id)];
  switch (n.op) {
    case Op::Choose: return true;
    case Op::Var: return var_dynamic(static_cast<size_t>(n.a), state);
    case Op::Neg: return subtree_dynamic(n.a, state);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return subtree_dynamic(n.a, state) || subtree_dynamic(n.b, state);
    default: return false;
  }
}

int32_t CompiledModel::lower(const Expr& expr) {
  Node out;
  out.pos = expr.pos;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out.op = Op::Const;
          out.v0 = node.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out.op = Op::Var;
          out.a = *building_->var_index(node.name);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          switch (node.op) {
            case BinOp::Add: out.op = Op::Add; break;
            case BinOp::Sub: out.op = Op::Sub; break;
            case BinOp::Mul: out.op = Op::Mul; break;
            case BinOp::Div: out.op = Op::Div; break;
            case BinOp::Pow: out.op = Op::Pow; break;
          }
          out.a = lower(*node.lhs);
          out.b = lower(*node.rhs);
        } else if constexpr (std::is_same_v<T, NegExpr>) {
          out.op = Op::Neg;
          out.a = lower(*node.operand);
        } else if constexpr (std::is_same_v<T, DistCall>) {
          double args[3] = {0, 0, 0};
          for (size_t i = 0; i < node.args.size() && i < 3; ++i) {
            args[i] = fold_literal(*node.args[i]);
          }
          uint64_t anon_index = anon_counter_++;
          if (node.kind == DistKind::Deterministic) {
            out.op = Op::Const;
            out.v0 = args[0];
          } else {
            out.op = Op::Draw;
            out.dist = node.kind;
            out.v0 = args[0];
            out.v1 = args[1];
            out.v2 = args[2];
            out.stream = param_root_ == &expr
                             ? param_stream_
                             : rng::fnv1a("anon:" + std::to_string(anon_index));
          }
        } else {
          int di = *building_->decision_index(node.name);
          out.op = Op::Choose;
          out.a = di;
          auto& bodies = decision_options_[static_cast<size_t>(di)];
          bodies.reserve(node.options.size());
          for (const auto& opt : node.options) bodies.push_back(lower(*opt.body));
        }
      },
      expr.node);
  nodes_.push_back(out);
  return static_cast<int32_t>(nodes_.size() - 1);
}

namespace {

// A Value is a scalar, a pooled window buffer (buf >= 0), or a pinned
// static buffer (buf <= -2 encodes static-store index -buf-2).
struct Value {
  double scalar = 0;
  int32_t buf = -1;
  bool temp = false;

  bool is_scalar() const { return buf == -1; }
};

// Per-worker evaluation state: an arena of window-sized buffers plus an
// epoch-stamped per-variable memo. Constant subexpressions stay scalars, so
// option bodies without draws cost nothing per run. Static variables
// (parameter draws and anything else untouched by decisions) are pinned once
// per run window and shared by every solution evaluated in that window.
class EvalContext {
 public:
  EvalContext(const CompiledModel& cm, uint64_t seed, size_t window_cap)
      : cm_(cm),
        seed_(seed),
        cap_(window_cap ? window_cap : 1),
        memo_(cm.num_vars()),
        memo_epoch_(cm.num_vars(), 0),
        static_vals_(cm.num_vars()),
        static_epoch_(cm.num_vars(), 0),
        static_store_(cm.num_vars()) {}

  void begin(std::span<const int8_t> assignment, size_t solution_label, size_t run0,
             size_t len) {
    if (run0 != run0_ || len != len_) ++window_stamp_;
    assign_ = assignment;
    solution_ = solution_label;
    run0_ = run0;
    len_ = len;
    ++epoch_;
    free_.clear();
    for (int32_t i = 0; i < static_cast<int32_t>(storage_.size()); ++i) {
      free_.push_back(i);
      checked_[static_cast<size_t>(i)] = 0;
    }
  }

  Value eval_var(int slot) {
    size_t s = static_cast<size_t>(slot);
    if (memo_epoch_[s] == epoch_) {
      return {memo_[s].scalar, memo_[s].buf, false};
    }
    bool is_static = cm_.var_is_static(s);
    if (is_static && static_epoch_[s] == window_stamp_) {
      memo_[s] = static_vals_[s];
      memo_epoch_[s] = epoch_;
      return memo_[s];
    }
    Value v = eval(cm_.var_root(s));
    if (v.is_scalar()) {
      if (!std::isfinite(v.scalar)) localize(cm_.var_root(s));
    } else if (v.buf >= 0 && !checked_[static_cast<size_t>(v.buf)]) {
      check_vector(v.buf, cm_.var_root(s));
    }
    if (is_static) {
      v = pin_static(s, v);
      static_vals_[s] = v;
      static_epoch_[s] = window_stamp_;
    }
    memo_[s] = {v.scalar, v.buf, false};
    memo_epoch_[s] = epoch_;
    return memo_[s];
  }

  const double* data(int32_t buf) const {
    return buf <= -2 ? static_store_[static_cast<size_t>(-buf - 2)].data()
                     : storage_[static_cast<size_t>(buf)].get();
  }

 private:
  Value eval(int32_t id) {
    const Node& n = cm_.nodes()[static_cast<size_t>(id)];
    switch (n.op) {
      case Op::Const:
        return {n.v0, -1, false};
      case Op::Var:
        return eval_var(n.a);
      case Op::Neg: {
        Value v = eval(n.a);
        if (v.is_scalar()) return {-v.scalar, -1, false};
        int32_t dst = v.temp ? v.buf : alloc();
        const double* s = data(v.buf);
        double* d = storage_[static_cast<size_t>(dst)].get();
        for (size_t i = 0; i < len_; ++i) d[i] = -s[i];
        checked_[static_cast<size_t>(dst)] = 0;
        return {0, dst, true};
      }
      case Op::Draw: {
        int32_t dst = alloc();
        fill_draws(n, storage_[static_cast<size_t>(dst)].get());
        return {0, dst, true};
      }
      case Op::Choose: {
        int8_t opt = assign_[static_cast<size_t>(n.a)];
        if (opt < 0) {
          throw NumericError("decision '" + cm_.decision_name(static_cast<size_t>(n.a)) +
                                 "' is unbound in this solution but its value is required",
                             solution_, run0_, n.pos);
        }
        return eval(cm_.options_of(static_cast<size_t>(n.a))[static_cast<size_t>(opt)]);
      }
      default:
        return binary(n, id);
    }
  }

  Value binary(const Node& n, int32_t id) {
    Value l = eval(n.a);
    Value r = eval(n.b);
    bool div_like = n.op == Op::Div || n.op == Op::Pow;
    if (l.is_scalar() && r.is_scalar()) {
      double res = apply_scalar(n.op, l.scalar, r.scalar);
      if (div_like && !std::isfinite(res)) {
        throw NumericError(numeric_message(n.op, r.scalar), solution_, run0_, n.pos);
      }
      return {res, -1, false};
    }
    int32_t dst = l.temp ? l.buf : (r.temp ? r.buf : alloc());
    double* d = storage_[static_cast<size_t>(dst)].get();
    auto loop = [&](auto fn) {
      if (l.is_scalar()) {
        double a = l.scalar;
        const double* b = data(r.buf);
        for (size_t i = 0; i < len_; ++i) d[i] = fn(a, b[i]);
      } else if (r.is_scalar()) {
        const double* a = data(l.buf);
        double b = r.scalar;
        for (size_t i = 0; i < len_; ++i) d[i] = fn(a[i], b);
      } else {
        const double* a = data(l.buf);
        const double* b = data(r.buf);
        for (size_t i = 0; i < len_; ++i) d[i] = fn(a[i], b[i]);
      }
    };
    switch (n.op) {
      case Op::Add: loop([](double a, double b) { return a + b; }); break;
      case Op::Sub: loop([](double a, double b) { return a - b; }); break;
      case Op::Mul: loop([](double a, double b) { return a * b; }); break;
      case Op::Div: loop([](double a, double b) { return a / b; }); break;
      default: loop([](double a, double b) { return std::pow(a, b); }); break;
    }
    if (l.temp && l.buf != dst) release(l.buf);
    if (r.temp && r.buf != dst) release(r.buf);
    checked_[static_cast<size_t>(dst)] = 0;
    // '/' and '^' are the operators that can go non-finite on finite,
    // in-range inputs; they are verified eagerly so the failing node is
    // known. Everything else is verified once per variable.
    if (div_like) check_vector(dst, id);
    return {0, dst, true};
  }

  void fill_draws(const Node& n, double* d) {
    const uint64_t seed = seed_;
    const uint64_t stream = n.stream;
    const uint64_t base = run0_;
    switch (n.dist) {
      case DistKind::Normal:
        for (size_t i = 0; i < len_; ++i) {
          d[i] = rng::normal_from_unit(rng::uniform01(seed, stream, base + i), n.v0, n.v1);
        }
        break;
      case DistKind::Uniform:
        for (size_t i = 0; i < len_; ++i) {
          d[i] = rng::uniform_from_unit(rng::uniform01(seed, stream, base + i), n.v0, n.v1);
        }
        break;
      case DistKind::Triangular:
        for (size_t i = 0; i < len_; ++i) {
          d[i] = rng::triangular_from_unit(rng::uniform01(seed, stream, base + i), n.v0,
                                           n.v1, n.v2);
        }
        break;
      case DistKind::Exponential:
        for (size_t i = 0; i < len_; ++i) {
          d[i] = rng::exponential_from_unit(rng::uniform01(seed, stream, base + i), n.v0);
        }
        break;
      case DistKind::Deterministic:
        for (size_t i = 0; i < len_; ++i) d[i] = n.v0;
        break;
    }
  }

  // Moves a freshly computed static value out of the transient pool so it
  // survives until the window changes. Scalars and aliases of other pinned
  // variables are stored as-is.
  Value pin_static(size_t slot, Value v) {
    if (v.is_scalar() || v.buf <= -2) return {v.scalar, v.buf, false};
    auto& store = static_store_[slot];
    store.resize(len_);
    std::memcpy(store.data(), data(v.buf), len_ * sizeof(double));
    if (v.temp) release(v.buf);
    return {0, -static_cast<int32_t>(slot) - 2, false};
  }

  int32_t alloc() {
    if (free_.empty()) {
      storage_.push_back(std::make_unique<double[]>(cap_));
      checked_.push_back(0);
      return static_cast<int32_t>(storage_.size() - 1);
    }
    int32_t b = free_.back();
    free_.pop_back();
    checked_[static_cast<size_t>(b)] = 0;
    return b;
  }

  void release(int32_t buf) { free_.push_back(buf); }

  // Cheap whole-buffer finiteness test: x * 0 is 0 for finite x and NaN for
  // inf/NaN, and the compiler must preserve it under IEEE rules.
  void check_vector(int32_t buf, int32_t origin) {
    const double* v = data(buf);
    double z = 0;
    for (size_t i = 0; i < len_; ++i) z += v[i] * 0.0;
    if (!(z == 0.0)) localize(origin);
    checked_[static_cast<size_t>(buf)] = 1;
  }

  static std::string numeric_message(Op op, double rhs) {
    if (op == Op::Div && rhs == 0) return "division by zero";
    return std::string("non-finite result from '") + op_symbol(op) + "'";
  }

  // Slow path taken only after a vector check fails: re-evaluates the
  // subtree run by run with per-node verification to name the exact
  // operation and run index.
  [[noreturn]] void localize(int32_t origin) {
    for (size_t i = 0; i < len_; ++i) probe(origin, i);
    throw NumericError("non-finite value", solution_, run0_,
                       cm_.nodes()[static_cast<size_t>(origin)].pos);
  }

  double probe(int32_t id, size_t i) {
    const Node& n = cm_.nodes()[static_cast<size_t>(id)];
    switch (n.op) {
      case Op::Const:
        return n.v0;
      case Op::Var: {
        size_t slot = static_cast<size_t>(n.a);
        if (memo_epoch_[slot] == epoch_) {
          const Value& m = memo_[slot];
          return m.is_scalar() ? m.scalar : data(m.buf)[i];
        }
        return probe(cm_.var_root(slot), i);
      }
      case Op::Neg:
        return -probe(n.a, i);
      case Op::Draw:
        return transform_unit(n.dist, rng::uniform01(seed_, n.stream, run0_ + i), n.v0,
                              n.v1, n.v2);
      case Op::Choose:
        return probe(
            cm_.options_of(static_cast<size_t>(n.a))[static_cast<size_t>(
                assign_[static_cast<size_t>(n.a)])],
            i);
      default: {
        double a = probe(n.a, i);
        double b = probe(n.b, i);
        double res = apply_scalar(n.op, a, b);
        if (!std::isfinite(res)) {
          throw NumericError(numeric_message(n.op, b), solution_, run0_ + i, n.pos);
        }
        return res;
      }
    }
  }

  const CompiledModel& cm_;
  uint64_t seed_;
  size_t cap_;
  std::vector<std::unique_ptr<double[]>> storage_;
  std::vector<int32_t> free_;
  std::vector<uint8_t> checked_;
  std::vector<Value> memo_;
  std::vector<uint64_t> memo_epoch_;
  std::vector<Value> static_vals_;
  std::vector<uint64_t> static_epoch_;
  std::vector<std::vector<double>> static_store_;
  uint64_t epoch_ = 0;
  uint64_t window_stamp_ = 0;
  std::span<const int8_t> assign_;
  size_t solution_ = 0;
  size_t run0_ = 0;
  size_t len_ = 0;
};

// Evaluates every objective of one solution over one run window, adding the
// window's contribution to the running sums (strict run order per solution)
// and optionally retaining the raw draws.
void simulate_window(EvalContext& ctx, const CompiledModel& cm, const DesignSpace& ds,
                     size_t n_runs, size_t s, size_t w, size_t len, double* sums,
                     double* draws) {
  size_t num_obj = cm.num_objectives();
  ctx.begin(ds.assignment(s), s, w, len);
  for (size_t o = 0; o < num_obj; ++o) {
    Value v = ctx.eval_var(cm.objective(o).var_slot);
    double* dst = draws ? draws + (s * num_obj + o) * n_runs + w : nullptr;
    double a = sums[s * num_obj + o];
    if (v.is_scalar()) {
      double x = v.scalar;
      for (size_t i = 0; i < len; ++i) a += x;
      if (dst) std::fill(dst, dst + len, x);
    } else {
      const double* p = ctx.data(v.buf);
      for (size_t i = 0; i < len; ++i) a += p[i];
      if (dst) std::memcpy(dst, p, len * sizeof(double));
    }
    sums[s * num_obj + o] = a;
  }
}

int resolve_workers(int requested, size_t solutions) {
  int w = requested;
  if (w <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    w = hc ? static_cast<int>(hc) : 1;
  }
  if (solutions < static_cast<size_t>(w)) w = static_cast<int>(solutions ? solutions : 1);
  return w;
}

}  // namespace

SimulationResult simulate(const CompiledModel& model, const DesignSpace& space,
                          const RandomPlan& plan, const SimOptions& options) {
  if (plan.n_runs == 0) throw ConfigError("n_runs must be at least 1");
  size_t S = space.size();
  size_t M = model.num_objectives();
  size_t N = plan.n_runs;

  unsigned __int128 projected =
      static_cast<unsigned __int128>(S) * M * N * sizeof(double);
  SimMode mode = options.mode;
  if (mode == SimMode::Auto) {
    mode = projected <= static_cast<unsigned __int128>(options.retention_threshold)
               ? SimMode::FullRetention
               : SimMode::Streaming;
  }
  if (mode == SimMode::FullRetention &&
      projected > static_cast<unsigned __int128>(options.memory_budget)) {
    throw CapacityError("retaining draws needs " + std::to_string(static_cast<double>(projected)) +
                        " bytes, budget is " + std::to_string(options.memory_budget));
  }

  SimulationResult result;
  result.num_solutions = S;
  result.num_objectives = M;
  result.n_runs = N;
  result.mode = mode;
  result.means.assign(S * M, 0.0);
  if (mode == SimMode::FullRetention) {
    try {
      result.draws.resize(S * M * N);
    } catch (const std::bad_alloc&) {
      throw CapacityError("failed to allocate " +
                          std::to_string(static_cast<double>(projected)) +
                          " bytes of draw storage");
    }
  }
  double* draws = mode == SimMode::FullRetention ? result.draws.data() : nullptr;
  double* means = result.means.data();

  auto t0 = std::chrono::steady_clock::now();
  auto expired = [&]() {
    if (options.deadline_seconds <= 0) return false;
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return dt.count() > options.deadline_seconds;
  };

  size_t window = std::min(kEvalWindow, N);
  int workers = resolve_workers(options.workers, S);

  // Windows are the outer loop so each worker's static cache (parameter
  // draws and other decision-independent values) is filled once per window
  // and reused by every solution in it. Each solution's sums still advance
  // strictly in run order — windows are processed in order with a barrier
  // between them — so worker counts and retention modes cannot change a bit.
  std::vector<std::unique_ptr<EvalContext>> ctxs;
  ctxs.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    ctxs.push_back(std::make_unique<EvalContext>(model, plan.root_seed, window));
  }

  for (size_t w = 0; w < N; w += window) {
    size_t len = std::min(window, N - w);
    if (workers <= 1) {
      EvalContext& ctx = *ctxs[0];
      for (size_t s = 0; s < S; ++s) {
        if (expired()) throw TimeoutError("simulation exceeded its deadline");
        simulate_window(ctx, model, space, N, s, w, len, means, draws);
      }
      continue;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    size_t chunk = std::max<size_t>(
        1, std::min<size_t>(2048, S / (static_cast<size_t>(workers) * 16)));

    auto body = [&](EvalContext& ctx) {
      try {
        for (;;) {
          size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
          if (begin >= S || stop.load(std::memory_order_relaxed)) return;
          size_t end = std::min(S, begin + chunk);
          for (size_t s = begin; s < end; ++s) {
            if (stop.load(std::memory_order_relaxed)) return;
            if (expired()) throw TimeoutError("simulation exceeded its deadline");
            simulate_window(ctx, model, space, N, s, w, len, means, draws);
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body, std::ref(*ctxs[static_cast<size_t>(t)]));
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (double& m : result.means) m /= static_cast<double>(N);
  return result;
}

std::map<std::string, double> evaluate_run(const CompiledModel& model,
                                           std::span<const int8_t> assignment,
                                           const RandomPlan& plan, size_t run_index) {
  if (assignment.size() != model.num_decisions()) {
    throw LengthMismatchError("assignment has " + std::to_string(assignment.size()) +
                              " entries for " + std::to_string(model.num_decisions()) +
                              " decisions");
  }
  if (run_index >= plan.n_runs) {
    throw ConfigError("run index " + std::to_string(run_index) + " outside plan of " +
                      std::to_string(plan.n_runs) + " runs");
  }
  EvalContext ctx(model, plan.root_seed, 1);
  ctx.begin(assignment, SIZE_MAX, run_index, 1);
  std::map<std::string, double> out;
  for (size_t o = 0; o < model.num_objectives(); ++o) {
    Value v = ctx.eval_var(model.objective(o).var_slot);
    out[model.objective(o).name] = v.is_scalar() ? v.scalar : ctx.data(v.buf)[0];
  }
  return out;
}

NbMatrix nb_matrix(const CompiledModel& model, const DesignSpace& space,
                   const RandomPlan& plan, size_t objective_index,
                   std::span<const size_t> shortlist, const SimulationResult* retained,
                   const SimOptions& options) {
  (void)options;
  if (objective_index >= model.num_objectives()) {
    throw ConfigError("objective index out of range");
  }
  size_t J = shortlist.size();
  size_t N = plan.n_runs;
  const auto& obj = model.objective(objective_index);
  bool negate = obj.direction == Direction::Min;

  NbMatrix nb;
  nb.objective = obj.name;
  nb.solutions.assign(shortlist.begin(), shortlist.end());
  nb.n_runs = N;
  nb.values.resize(N * J);

  bool can_slice = retained && retained->retained() && retained->n_runs == N &&
                   retained->num_solutions == space.size() &&
                   retained->num_objectives == model.num_objectives();
  if (can_slice) {
    for (size_t j = 0; j < J; ++j) {
      const double* row = retained->draw_row(shortlist[j], objective_index);
      for (size_t i = 0; i < N; ++i) {
        nb.values[i * J + j] = negate ? -row[i] : row[i];
      }
    }
    return nb;
  }

  EvalContext ctx(model, plan.root_seed, std::min(kEvalWindow, N));
  for (size_t w = 0; w < N; w += kEvalWindow) {
    size_t len = std::min(kEvalWindow, N - w);
    for (size_t j = 0; j < J; ++j) {
      ctx.begin(space.assignment(shortlist[j]), shortlist[j], w, len);
      Value v = ctx.eval_var(obj.var_slot);
      if (v.is_scalar()) {
        double x = negate ? -v.scalar : v.scalar;
        for (size_t i = 0; i < len; ++i) nb.values[(w + i) * J + j] = x;
      } else {
        const double* p = ctx.data(v.buf);
        for (size_t i = 0; i < len; ++i) {
          nb.values[(w + i) * J + j] = negate ? -p[i] : p[i];
        }
      }
    }
  }
  return nb;
}

double sample_parameter(const DistributionSpec& dist, uint64_t root_seed,
                        uint64_t stream_id, uint64_t index) {
  if (dist.kind == DistKind::Deterministic) return dist.a;
  double u = rng::uniform01(root_seed, stream_id, index);
  return transform_unit(dist.kind, u, dist.a, dist.b, dist.c);
}

}  // namespace radar
