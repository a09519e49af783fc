#include "doctest.h"
#include "test_util.hpp"
#include "threadlint/access_paths.hpp"
#include "threadlint/printer.hpp"

using namespace threadlint;
using testutil::model_file;
using testutil::model_of;

namespace {

std::vector<std::pair<std::string, std::string>> facts_for(const AccessPaths& p, const std::string& field) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : p.facts())
    if (f.access->field->name == field) out.emplace_back(f.method->name, compact_text(*f.expr));
  return out;
}

using Facts = std::vector<std::pair<std::string, std::string>>;

}  // namespace

TEST_CASE("Test class: the public setter provides the private write") {
  auto m = model_file("counters/Test.java");
  AccessPaths p = provides_access(m->cm);
  CHECK(facts_for(p, "y") == Facts{{"setYPrivate", "this.y=y"}, {"setY", "setYPrivate(y)"}});

  const FieldAccess* write_y = nullptr;
  for (const auto& a : m->cm.accesses)
    if (a.field->name == "y") write_y = &a;
  REQUIRE(write_y);
  auto pub = public_access(p, *write_y);
  REQUIRE(pub.size() == 1);
  CHECK(compact_text(*pub[0]) == "setYPrivate(y)");
  CHECK(pub[0]->span.begin.line == 12);
}

TEST_CASE("access in an uncalled public method is a single base fact") {
  auto m = model_of("@ThreadSafe class A { private int x; public void f() { x = 1; } }");
  AccessPaths p = provides_access(m->cm);
  CHECK(facts_for(p, "x") == Facts{{"f", "x=1"}});
}

TEST_CASE("a three-method chain gives three facts") {
  auto m = model_of(R"(@ThreadSafe class A {
    private int x;
    public void a() { b(); }
    private void b() { c(); }
    private void c() { x = 1; }
  })");
  AccessPaths p = provides_access(m->cm);
  CHECK(facts_for(p, "x") == Facts{{"a", "b()"}, {"b", "c()"}, {"c", "x=1"}});
  CHECK(public_access(p, *p.facts()[0].access).size() == 1);
}

TEST_CASE("unreachable private access has no public access") {
  auto m = model_of(R"(@ThreadSafe class A {
    private int x;
    private void dead() { x = 1; }
    public void other() { }
  })");
  AccessPaths p = provides_access(m->cm);
  REQUIRE(p.facts().size() == 1);
  CHECK(public_access(p, *p.facts()[0].access).empty());
}

TEST_CASE("two public methods give two expressions") {
  auto m = model_of(R"(@ThreadSafe class A {
    private int x;
    public void f() { g(); }
    public void h() { this.g(); }
    private void g() { x++; }
  })");
  AccessPaths p = provides_access(m->cm);
  auto pub = public_access(p, *p.facts()[0].access);
  REQUIRE(pub.size() == 2);
  CHECK(compact_text(*pub[0]) == "g()");
  CHECK(compact_text(*pub[1]) == "this.g()");
}

TEST_CASE("recursion terminates and overloads resolve to all candidates") {
  auto m = model_of(R"(@ThreadSafe class A {
    private int x, y;
    public void f(int n) { g(n); }
    private void g(int n) { h(n); x = n; }
    private void h(int n) { g(n); }
    private void k(int n) { y = n; }
    private void k(String s) { x = 2; }
    public void run() { k(null); }
    public void other(A a) { a.k(3); }
  })");
  AccessPaths p = provides_access(m->cm);
  Facts xf = facts_for(p, "x");
  // x = n: base in g, via h's g(n), via f's g(n), via g's h(n); x = 2: base in k, via run.
  CHECK(xf == Facts{{"f", "g(n)"}, {"g", "h(n)"}, {"g", "x=n"}, {"h", "g(n)"},
                    {"k", "x=2"}, {"run", "k(null)"}});
  // k(null) is ambiguous, so it also provides y; a.k(3) is on another object.
  CHECK(facts_for(p, "y") == Facts{{"k", "y=n"}, {"run", "k(null)"}});
}

TEST_CASE("without the call rule only base facts remain") {
  auto m = model_file("counters/Test.java");
  AccessPaths p = provides_access(m->cm);
  std::size_t base = 0;
  for (const auto& f : p.facts()) base += f.expr == f.access->site;
  std::size_t exposed_in_methods = 0;
  for (const auto* a : exposed_accesses(m->cm)) exposed_in_methods += a->enclosing != nullptr;
  CHECK(base == exposed_in_methods);
}

TEST_CASE("constructors are not sources and package entry points are noted") {
  auto m = model_of(R"(@ThreadSafe class A {
    private int x;
    A() { set(); }
    void set() { x = 1; }
    protected int get() { return x; }
  })");
  AccessPaths p = provides_access(m->cm);
  for (const auto& f : p.facts()) CHECK(!f.method->is_constructor());
  REQUIRE(p.notes().size() == 2);
  CHECK(p.notes()[0] == "A.set is package-private and reaches field 'x'; only public methods are treated as entry points");
  CHECK(p.notes()[1].find("A.get is protected") == 0);
}
