#include <random>

#include "doctest.h"
#include "oracles/trace_oracle.hpp"
#include "test_util.hpp"
#include "threadlint/hb_oracle.hpp"

using namespace threadlint;
using oracle::act;
using testutil::model_file;
using testutil::model_of;

namespace {

std::vector<std::string> lines_of(const std::vector<TraceAction>& acts) {
  std::vector<std::string> out;
  for (const auto& a : acts) out.push_back(format_action(a));
  return out;
}

using Lines = std::vector<std::string>;

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Counter increments interleaved by statement: t1(5), t2(5), t1(6), t2(6), t1(7), t2(7).
const char* kInterleaved =
    "0 defaultInit cnt\n"
    "1 read cnt   # line 5\n"
    "2 read cnt\n"
    "1 local -    # line 6\n"
    "2 local -\n"
    "1 write cnt  # line 7\n"
    "2 write cnt\n";

}  // namespace

TEST_CASE("op names round trip") {
  for (ActionOp op : {ActionOp::Read, ActionOp::Write, ActionOp::VolatileRead, ActionOp::VolatileWrite,
                      ActionOp::Lock, ActionOp::Unlock, ActionOp::DefaultInit, ActionOp::FinalInit,
                      ActionOp::Local})
    CHECK(parse_op(op_name(op)) == op);
  CHECK_FALSE(parse_op("store"));
}

TEST_CASE("single thread is totally ordered") {
  Execution e = parse_trace("1 read x\n1 write x\n1 lock m\n1 unlock m\n");
  HbGraph hb = hb_closure(e);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(hb.ordered(i, j) == (i < j));
  CHECK(detect_races(e).empty());
}

TEST_CASE("statement-interleaved increments race") {
  Execution e = parse_trace(kInterleaved);
  HbGraph hb = hb_closure(e);
  CHECK_FALSE(hb.ordered(1, 6));  // t1 read (5) vs t2 write (7)
  CHECK_FALSE(hb.ordered(2, 5));  // t2 read (5) vs t1 write (7)
  CHECK(hb.ordered(0, 1));
  CHECK(hb.ordered(0, 2));
  auto races = detect_races(e);
  using R = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(races == R{{1, 6}, {2, 5}, {5, 6}});
}

TEST_CASE("CounterTS interleaving orders across threads through the lock") {
  Execution e = parse_trace(
      "0 defaultInit cnt\n0 finalInit l\n"
      "1 lock l\n1 read cnt\n1 local -\n1 write cnt\n1 unlock l\n"
      "2 lock l\n2 read cnt\n2 local -\n2 write cnt\n2 unlock l\n");
  HbGraph hb = hb_closure(e);
  CHECK(hb.ordered(5, 8));  // t1 write -> t2 read
  bool syn = false;
  for (const auto& edge : hb.edges())
    syn |= edge.kind == HbEdgeKind::Synchronization && edge.from == 6 && edge.to == 7;
  CHECK(syn);
  CHECK(detect_races(e).empty());
}

TEST_CASE("volatile write orders later volatile reads") {
  Execution e = parse_trace("1 write data\n1 volatileWrite flag\n2 volatileRead flag\n2 read data\n");
  CHECK(detect_races(e).empty());
  Execution racy = parse_trace("1 write data\n1 write flag\n2 read flag\n2 read data\n");
  CHECK(detect_races(racy).size() == 2);
}

TEST_CASE("malformed executions") {
  CHECK_THROWS_AS(hb_closure(parse_trace("1 unlock m\n")), MalformedExecution);
  CHECK_THROWS_AS(hb_closure(parse_trace("1 lock m\n2 lock m\n")), MalformedExecution);
  CHECK_THROWS_AS(hb_closure(parse_trace("1 read x\n0 defaultInit x\n")), MalformedExecution);
  CHECK_NOTHROW(hb_closure(parse_trace("1 lock m\n1 lock m\n1 unlock m\n1 unlock m\n2 lock m\n")));
  Execution bad_seq = parse_trace("1 read x\n1 read x\n");
  bad_seq.actions[1].seq = 0;
  CHECK_THROWS_AS(validate(bad_seq), MalformedExecution);
}

TEST_CASE("trace parsing") {
  Execution e = parse_trace("# header\n\n1 read x\n2 local\n0 finalInit f # trailing\n");
  REQUIRE(e.actions.size() == 3);
  CHECK(format_trace(e) == "1 read x\n2 local -\n0 finalInit f\n");
  CHECK(e.actions[0].line == 3);
  try {
    parse_trace("1 read x\n1 frob x\n", "t.trace");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 2);
    CHECK(err.message() == "unknown operation 'frob'");
  }
  CHECK_THROWS_AS(parse_trace("x read y\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("1 read\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("1 read a b\n"), ParseError);
}

TEST_CASE("enumeration counts") {
  ThreadProgram free;
  free.threads = {{act(1, ActionOp::Read, "a"), act(1, ActionOp::Local, "-"), act(1, ActionOp::Write, "a")},
                  {act(2, ActionOp::Read, "b"), act(2, ActionOp::Local, "-"), act(2, ActionOp::Write, "b")}};
  CHECK(enumerate_executions(free).size() == binomial(6, 3));
  CHECK(binomial(6, 3) == 20);

  ThreadProgram one;
  one.threads = {{act(1, ActionOp::Read, "a"), act(1, ActionOp::Write, "a")}};
  CHECK(enumerate_executions(one).size() == 1);

  ThreadProgram empty;
  CHECK(enumerate_executions(empty).size() == 1);
  CHECK_FALSE(program_races(empty).racy);

  // Three threads of 2, 2 and 1 actions: 5!/(2!2!1!) = 30.
  ThreadProgram three;
  three.threads = {{act(1, ActionOp::Local, "-"), act(1, ActionOp::Local, "-")},
                   {act(2, ActionOp::Local, "-"), act(2, ActionOp::Local, "-")},
                   {act(3, ActionOp::Local, "-")}};
  CHECK(enumerate_executions(three).size() == 30);
}

TEST_CASE("enumeration order is lowest thread first") {
  ThreadProgram p;
  p.threads = {{act(1, ActionOp::Read, "a"), act(1, ActionOp::Write, "a")},
               {act(2, ActionOp::Read, "a")}};
  auto all = enumerate_executions(p);
  REQUIRE(all.size() == 3);
  CHECK(format_trace(all[0]) == "1 read a\n1 write a\n2 read a\n");
  CHECK(format_trace(all[1]) == "1 read a\n2 read a\n1 write a\n");
  CHECK(format_trace(all[2]) == "2 read a\n1 read a\n1 write a\n");
}

TEST_CASE("mutual exclusion and deadlock") {
  ThreadProgram locked;
  locked.threads = {{act(1, ActionOp::Lock, "m"), act(1, ActionOp::Write, "x"), act(1, ActionOp::Unlock, "m")},
                    {act(2, ActionOp::Lock, "m"), act(2, ActionOp::Read, "x"), act(2, ActionOp::Unlock, "m")}};
  CHECK(enumerate_executions(locked).size() == 2);

  // Opposite lock order: interleavings where each thread holds one lock and
  // waits for the other are dropped. Two serial runs remain, plus one per
  // thread where the other takes its first lock after the inner release.
  ThreadProgram dl;
  dl.threads = {{act(1, ActionOp::Lock, "a"), act(1, ActionOp::Lock, "b"), act(1, ActionOp::Unlock, "b"),
                 act(1, ActionOp::Unlock, "a")},
                {act(2, ActionOp::Lock, "b"), act(2, ActionOp::Lock, "a"), act(2, ActionOp::Unlock, "a"),
                 act(2, ActionOp::Unlock, "b")}};
  CHECK(enumerate_executions(dl).size() == 4);
}

TEST_CASE("budget") {
  ThreadProgram big;
  big.threads.resize(2);
  for (int i = 0; i < 9; ++i) {
    big.threads[0].push_back(act(1, ActionOp::Local, "-"));
    big.threads[1].push_back(act(2, ActionOp::Local, "-"));
  }
  CHECK_THROWS_AS(enumerate_executions(big), BudgetExceeded);
  std::size_t seen = 0;
  EnumerationStats s = enumerate_executions(big, 100, [&](const Execution&) { ++seen; });
  CHECK(seen == 100);
  CHECK(s.truncated);
  CHECK_THROWS_AS(program_races(big, 100), BudgetExceeded);
  EnumerationStats all = enumerate_executions(big, 100000, [](const Execution&) {});
  CHECK_FALSE(all.truncated);
  CHECK(all.executions == binomial(18, 9));
}

TEST_CASE("driver for CounterDR") {
  auto m = model_file("counters/CounterDR.java");
  auto programs = driver_from_class(m->cm);
  REQUIRE(programs.size() == 1);
  const ThreadProgram& p = programs[0];
  CHECK(p.name == "CounterDR: inc || inc");
  CHECK(lines_of(p.main) == Lines{"0 defaultInit cnt"});
  CHECK(lines_of(p.threads[0]) == Lines{"1 read cnt", "1 local -", "1 write cnt"});
  CHECK(lines_of(p.threads[1]) == Lines{"2 read cnt", "2 local -", "2 write cnt"});
  CHECK(p.threads[0][0].line == 5);
  CHECK(p.threads[0][2].line == 7);

  RaceResult r = program_races(p);
  CHECK(r.racy);
  CHECK(r.executions == 20);
  CHECK(r.racy_executions == 20);
  REQUIRE(r.witness);
  CHECK(format_trace(*r.witness) ==
        "0 defaultInit cnt\n1 read cnt\n1 local -\n1 write cnt\n2 read cnt\n2 local -\n2 write cnt\n");

  // The statement-interleaved execution is one of the enumerated executions and races.
  bool found = false;
  std::string ex1 = format_trace(parse_trace(kInterleaved));
  for (const auto& e : enumerate_executions(p)) {
    if (format_trace(e) != ex1) continue;
    found = true;
    CHECK_FALSE(detect_races(e).empty());
  }
  CHECK(found);
}

TEST_CASE("driver for CounterTS") {
  auto m = model_file("counters/CounterTS.java");
  auto programs = driver_from_class(m->cm);
  REQUIRE(programs.size() == 1);
  const ThreadProgram& p = programs[0];
  CHECK(lines_of(p.main) == Lines{"0 defaultInit cnt", "0 finalInit l"});
  CHECK(lines_of(p.threads[0]) ==
        Lines{"1 lock lock:CounterTS.l", "1 read cnt", "1 local -", "1 write cnt", "1 unlock lock:CounterTS.l"});
  RaceResult r = program_races(p);
  CHECK_FALSE(r.racy);
  CHECK(r.executions == 2);
}

TEST_CASE("driver for the Test class inlines the private setter") {
  auto m = model_file("counters/Test.java");
  auto programs = driver_from_class(m->cm);
  REQUIRE(programs.size() == 1);
  CHECK(lines_of(programs[0].main) == Lines{"0 defaultInit y", "0 write lock"});
  CHECK(lines_of(programs[0].threads[0]) ==
        Lines{"1 lock lock:Test.lock", "1 write y", "1 unlock lock:Test.lock"});
  CHECK_FALSE(program_races(programs[0]).racy);
}

TEST_CASE("volatile-only class is race-free") {
  auto m = model_of(R"(@ThreadSafe class V {
    private volatile int v;
    public void set(int x) { v = x; }
    public int get() { return v; }
  })");
  auto programs = driver_from_class(m->cm);
  REQUIRE(programs.size() == 3);
  CHECK(lines_of(programs[1].threads[0]) == Lines{"1 volatileWrite v"});
  CHECK(lines_of(programs[1].threads[1]) == Lines{"2 volatileRead v"});
  for (const auto& p : programs) CHECK_FALSE(program_races(p).racy);
}

TEST_CASE("driver lowering details") {
  auto m = model_of(R"(@ThreadSafe class L {
    private final Lock l = new ReentrantLock();
    private int[] arr = new int[4];
    private java.util.List<Integer> items;
    private final java.util.concurrent.ConcurrentHashMap<String, Integer> map = null;
    private int n = 3;
    public synchronized void a(int i) { arr[i] += n; }
    public void b() { Lock k = l; k.lock(); try { items.add(1); } finally { k.unlock(); } }
    public void c() { synchronized (this) { map.put("a", n++); } }
    public static synchronized void d() { }
    public int e() { return items.size(); }
  })");
  auto acts = [&](const char* name) { return lines_of(method_actions(m->cm, m->method(name), 1)); };
  CHECK(acts("a") == Lines{"1 lock this", "1 read arr", "1 read arr[]", "1 read n", "1 write arr[]", "1 unlock this"});
  CHECK(acts("b") == Lines{"1 read l", "1 lock lock:L.l", "1 read items", "1 write items.state", "1 unlock lock:L.l"});
  CHECK(acts("c") == Lines{"1 lock this", "1 read map", "1 read n", "1 write n", "1 unlock this"});
  CHECK(acts("d") == Lines{"1 lock L.class", "1 unlock L.class"});
  CHECK(acts("e") == Lines{"1 read items", "1 read items.state"});
  auto programs = driver_from_class(m->cm);
  CHECK(lines_of(programs[0].main) ==
        Lines{"0 finalInit l", "0 defaultInit items", "0 finalInit map", "0 write arr", "0 write n"});
}

TEST_CASE("unsupported bodies") {
  auto m = model_of(R"(@ThreadSafe class U {
    private int x;
    public void branch(boolean c) { if (c) x = 1; }
    public void loop() { while (x < 3) x++; }
    public void early() { return; }
    public int tail() { x = 1; return x; }
    public void rec() { rec(); }
    public void cond(boolean c) { int t = c ? x : 0; }
    public void cond2(boolean c) { boolean t = c && x > 0; }
    public void catches() { try { x = 1; } catch (RuntimeException e) { } }
    public void unlocked() { l.unlock(); }
    private final Lock l = new ReentrantLock();
  })");
  for (const char* name : {"branch", "loop", "rec", "cond", "cond2", "catches", "unlocked"}) {
    CAPTURE(name);
    CHECK_THROWS_AS(method_actions(m->cm, m->method(name), 1), UnsupportedForOracle);
  }
  CHECK_NOTHROW(method_actions(m->cm, m->method("early"), 1));
  CHECK(lines_of(method_actions(m->cm, m->method("tail"), 1)) == Lines{"1 write x", "1 read x"});
  CHECK_THROWS_AS(driver_from_class(m->cm), UnsupportedForOracle);
  try {
    method_actions(m->cm, m->method("branch"), 1);
  } catch (const UnsupportedForOracle& e) {
    CHECK(std::string(e.what()) == "U.branch: if statement at line 3");
  }
}

TEST_CASE("closure agrees with vector clocks on random executions") {
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 500; ++iter) {
    ThreadProgram p = oracle::random_program(rng, 12);
    Execution e = oracle::random_interleaving(rng, p);
    CAPTURE(format_trace(e));
    HbGraph hb = hb_closure(e);
    CHECK(hb.is_strict_partial_order());
    auto vc = oracle::vector_clock_hb(e);
    for (std::size_t i = 0; i < e.actions.size(); ++i)
      for (std::size_t j = 0; j < e.actions.size(); ++j) CHECK(hb.ordered(i, j) == vc[i][j]);
    CHECK(detect_races(e) == oracle::vector_clock_races(e));
  }
}

TEST_CASE("program order edges are contained in the closure") {
  std::mt19937 rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    Execution e = oracle::random_interleaving(rng, oracle::random_program(rng, 12));
    HbGraph hb = hb_closure(e);
    for (std::size_t i = 0; i < e.actions.size(); ++i)
      for (std::size_t j = i + 1; j < e.actions.size(); ++j)
        if (e.actions[i].thread == e.actions[j].thread) CHECK(hb.ordered(i, j));
  }
}

TEST_CASE("volatile substitution removes races on the field") {
  std::mt19937 rng(77);
  for (int iter = 0; iter < 300; ++iter) {
    Execution e = oracle::random_interleaving(rng, oracle::random_program(rng, 12));
    for (const char* f : {"x", "y", "z"}) {
      Execution v = e;
      for (auto& a : v.actions) {
        if (a.target != f) continue;
        if (a.op == ActionOp::Read) a.op = ActionOp::VolatileRead;
        if (a.op == ActionOp::Write) a.op = ActionOp::VolatileWrite;
      }
      for (auto [i, j] : detect_races(v)) CHECK(v.actions[i].target != f);
    }
  }
}

TEST_CASE("init actions never race when every field is default or final") {
  std::mt19937 rng(8);
  for (int iter = 0; iter < 200; ++iter) {
    ThreadProgram p = oracle::random_program(rng, 12);
    if (p.total_actions() > kDefaultActionBudget) continue;
    auto r = program_races(p);
    if (!r.witness) continue;
    for (auto [i, j] : r.witness_races) {
      CHECK(r.witness->actions[i].op != ActionOp::DefaultInit);
      CHECK(r.witness->actions[i].op != ActionOp::FinalInit);
    }
  }
}
