#include <map>

#include "pcl/dsl/script.hpp"
#include "pcl/errors.hpp"

namespace pcl::dsl {

namespace {

constexpr std::string_view kPappus = R"(# Pappus: three points on each of two lines
point A1 A2 A3 B1 B2 B3;
line a b;
on A1 a; on A2 a; on A3 a;
on B1 b; on B2 b; on B3 b;
C1 = meet(join(A1, B2), join(A2, B1));
C2 = meet(join(A1, B3), join(A3, B1));
C3 = meet(join(A2, B3), join(A3, B2));
assert collinear C1 C2 C3;
)";

constexpr std::string_view kDesargues = R"(# Desargues: two triangles in perspective from O
point O A1 A2 A3 B1 B2 B3;
l1 = join(O, A1);
l2 = join(O, A2);
l3 = join(O, A3);
on B1 l1; on B2 l2; on B3 l3;
C1 = meet(join(A2, A3), join(B2, B3));
C2 = meet(join(A1, A3), join(B1, B3));
C3 = meet(join(A1, A2), join(B1, B2));
assert collinear C1 C2 C3;
)";

constexpr std::string_view kPascal = R"(# Pascal: hexagon inscribed in a conic
conic K;
point P1 P2 P3 P4 P5 P6;
on P1 K; on P2 K; on P3 K; on P4 K; on P5 K; on P6 K;
X1 = meet(join(P1, P2), join(P4, P5));
X2 = meet(join(P2, P3), join(P5, P6));
X3 = meet(join(P3, P4), join(P6, P1));
assert collinear X1 X2 X3;
)";

constexpr std::string_view kBrianchon = R"(# Brianchon: hexagon circumscribed about a conic
conic K;
line t1 t2 t3 t4 t5 t6;
on t1 K; on t2 K; on t3 K; on t4 K; on t5 K; on t6 K;
Y1 = join(meet(t1, t2), meet(t4, t5));
Y2 = join(meet(t2, t3), meet(t5, t6));
Y3 = join(meet(t3, t4), meet(t6, t1));
assert concurrent Y1 Y2 Y3;
)";

const std::map<std::string_view, std::string_view>& table() {
  static const std::map<std::string_view, std::string_view> t{
      {"pappus", kPappus}, {"desargues", kDesargues}, {"pascal", kPascal}, {"brianchon", kBrianchon}};
  return t;
}

}  // namespace

std::string_view builtin_script_text(std::string_view name) {
  auto it = table().find(name);
  if (it == table().end()) fail(ErrorKind::NotFound, "no built-in script '" + std::string(name) + "'");
  return it->second;
}

Script builtin_script(std::string_view name) {
  return parse_script(builtin_script_text(name), std::string(name));
}

const std::vector<std::string>& builtin_script_names() {
  static const std::vector<std::string> names{"pappus", "desargues", "pascal", "brianchon"};
  return names;
}

}  // namespace pcl::dsl
