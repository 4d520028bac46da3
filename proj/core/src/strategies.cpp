#include "stratbound/strategies.hpp"

#include <map>
#include <mutex>

#include "stratbound/errors.hpp"
#include "stratbound/templates.hpp"

namespace stratbound {

namespace {

// Common front part of Bob's programs: skip unless the last observation is a
// state i/j with j = n-1; leaves i in register i.
constexpr const char* kBobLinearPrelude = R"(; Bob, coffee machine
  hlen h
  jeq h 0 skip
  nstates s
  set n 0
find_n:                 ; least n with (n+1)(n+2)/2 >= s
  add a n 1
  add b n 2
  mul t a b
  shr t t 1
  jge t s have_n
  add n n 1
  jmp find_n
have_n:
  sub h h 1
  hobs q h
  set j 0
find_j:                 ; largest j with j(j+1)/2 <= q
  add a j 1
  add b j 2
  mul t a b
  shr t t 1
  jgt t q have_j
  add j j 1
  jmp find_j
have_j:
  sub last n 1
  jne j last skip
  mul t j a
  shr t t 1
  sub i q t
)";

constexpr const char* kBobSqrtPrelude = R"(; Bob, coffee machine, O(log n) arithmetic
  hlen h
  jeq h 0 skip
  nstates s
  mul x s 8
  add x x 1
  call isqrt
  sub n r 3
  shr n n 1
  sub h h 1
  hobs q h
  mul x q 8
  add x x 1
  call isqrt
  sub j r 1
  shr j j 1
  sub last n 1
  jne j last skip
  add a j 1
  mul t j a
  shr t t 1
  sub i q t
)";

constexpr const char* kBobDecide = R"(  band r r 1
  jeq r 1 skip
  emit 0
skip:
  emit 1
)";

constexpr const char* kNaiveFib = R"(  set x i
  call fib
)";

constexpr const char* kNaiveFibSub = R"(fib:                    ; r = F(x)
  jge x 2 fib_rec
  set r x
  ret
fib_rec:
  push x
  sub x x 1
  call fib
  pop x
  push r
  sub x x 2
  call fib
  pop t
  add r r t
  ret
)";

constexpr const char* kMemoFib = R"(  add size i 2
  alloc f size
  st f 1 1
  set t 2
fill:
  jgt t i filled
  sub u t 1
  ld x f u
  sub u t 2
  ld y f u
  add x x y
  st f t x
  add t t 1
  jmp fill
filled:
  ld r f i
)";

constexpr const char* kMatrixFib = R"(  set e i
  set a 1                 ; R = identity
  set b 0
  set c 0
  set d 1
  set p 1                 ; M = [[1,1],[1,0]]
  set v 1
  set w 1
  set z 0
power:
  jeq e 0 powered
  band t e 1
  jeq t 0 square
  mul t a p
  mul u b w
  add na t u
  mul t a v
  mul u b z
  add nb t u
  mul t c p
  mul u d w
  add nc t u
  mul t c v
  mul u d z
  add nd t u
  set a na
  set b nb
  set c nc
  set d nd
square:
  mul t p p
  mul u v w
  add np t u
  mul t p v
  mul u v z
  add nv t u
  mul t w p
  mul u z w
  add nw t u
  mul t w v
  mul u z z
  add nz t u
  set p np
  set v nv
  set w nw
  set z nz
  shr e e 1
  jmp power
powered:
  set r b
)";

constexpr const char* kIsqrtSub = R"(isqrt:                  ; r = floor(sqrt(x)), x clobbered
  set r 0
  set bit 1
isqrt_up:
  shl t bit 2
  jgt t x isqrt_loop
  set bit t
  jmp isqrt_up
isqrt_loop:
  jeq bit 0 isqrt_done
  add t r bit
  jlt x t isqrt_less
  sub x x t
  shr r r 1
  add r r bit
  jmp isqrt_next
isqrt_less:
  shr r r 1
isqrt_next:
  shr bit bit 2
  jmp isqrt_loop
isqrt_done:
  ret
)";

constexpr const char* kSatBruteforce = R"(; verifier, SAT game: search all assignments at every decision
  hlen h
  jeq h 0 idle
  sub h h 1
  hobs o h
  nactions n
  sub n n 3
  nstates s
  sub s s 3
  div k s n
  jlt o 1 idle
  jgt o k idle
  mul qt n k
  add qt qt 1
  shl lim 1 k
  set a 0
try:
  jge a lim none
  set i 0
clause:
  jge i n found
  set j 0
literal:
  jge j k rejected
  mul q i k
  add q q j
  add q q 1
  shr bit a j
  band bit bit 1
  jeq bit 1 probe_top
  succ t q 1 2
  jmp probed
probe_top:
  succ t q 0 2
probed:
  jeq t qt satisfied
  add j j 1
  jmp literal
satisfied:
  add i i 1
  jmp clause
rejected:
  add a a 1
  jmp try
found:
  sub j o 1
  shr bit a j
  band bit bit 1
  jeq bit 1 none
  emit 1
none:
  emit 0
idle:
  emit 2
)";

std::vector<BuiltinStrategy> make_registry() {
  const std::string naive = std::string(kBobLinearPrelude) + kNaiveFib + kBobDecide + kNaiveFibSub;
  const std::string memo = std::string(kBobLinearPrelude) + kMemoFib + kBobDecide;
  const std::string matrix = std::string(kBobSqrtPrelude) + kMatrixFib + kBobDecide + kIsqrtSub;
  return {
      {"alice_skip", "tape machine writing skip (1) without reading its input", MachineKind::tape,
       "work 0\nstart q0\nq0 ** -> h 1 SSR\n", "Alice"},
      {"alice_skip_vm", "program emitting skip (1)", MachineKind::program, "  emit 1\n", "Alice"},
      {"bob_fib_naive", "skip iff F(i) is odd at i/(n-1); naive recursion", MachineKind::program, naive, "Bob"},
      {"bob_fib_memo", "skip iff F(i) is odd at i/(n-1); memoized table", MachineKind::program, memo, "Bob"},
      {"bob_fib_matrix", "skip iff F(i) is odd at i/(n-1); matrix power by repeated squaring",
       MachineKind::program, matrix, "Bob"},
      {"sat_bruteforce", "SAT-game verifier trying every assignment in counting order", MachineKind::program,
       kSatBruteforce, "v"},
      {"idle", "program emitting action 0", MachineKind::program, "  emit 0\n", ""},
  };
}

}  // namespace

const std::vector<BuiltinStrategy>& builtin_strategies() {
  static const std::vector<BuiltinStrategy> registry = make_registry();
  return registry;
}

const BuiltinStrategy* find_builtin(std::string_view name) {
  for (const auto& s : builtin_strategies()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

MachinePtr builtin_machine(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, MachinePtr, std::less<>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  const BuiltinStrategy* s = find_builtin(name);
  if (!s) {
    std::string known;
    for (const auto& b : builtin_strategies()) known += (known.empty() ? "" : ", ") + b.name;
    throw InputError("unknown strategy '" + std::string(name) + "' (known: " + known + ")");
  }
  auto m = std::make_shared<const Machine>(parse_machine(s->source, s->kind));
  cache.emplace(s->name, m);
  return m;
}

FiniteMemoryStrategy verifier_from_assignment(const Cnf& cnf, const std::vector<bool>& assignment) {
  if (assignment.size() != cnf.variables()) throw InputError("assignment has the wrong number of variables");
  const std::uint32_t k = cnf.variables();
  const auto n = static_cast<std::uint32_t>(cnf.clauses().size());
  std::vector<ActionId> act(n * k + 3, satgame::idle);
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = 1; j <= k; ++j) act[satgame::literal(k, i, j)] = assignment[j - 1] ? satgame::top : satgame::bot;
  }
  return FiniteMemoryStrategy::memoryless(satgame::verifier, std::move(act));
}

FiniteMemoryStrategy bob_memoryless(std::uint32_t n) {
  if (n < 2) throw InputError("coffee needs at least 2 cups");
  std::vector<ActionId> act(coffee::state_count(n), coffee::skip);
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool f_odd = i % 3 != 0;  // F mod 2 is 0,1,1,0,1,1,...
    act[coffee::state(i, n - 1)] = f_odd ? coffee::skip : coffee::request;
  }
  return FiniteMemoryStrategy::memoryless(coffee::bob, std::move(act));
}

}  // namespace stratbound
