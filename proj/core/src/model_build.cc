#include "twoscvrp/model_build.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace twoscvrp {
namespace {

std::string Join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '_';
    out += p;
  }
  return out;
}

Term T(Rational coef, VarId var) { return Term{coef, var}; }

const char* kAxis3[] = {"x", "y", "z"};

bool Has3D(const Instance& in, const ModelConfig& config) { return in.is_3d() && config.enable_3d; }

// Shared pieces of the base model: packing and destination propagation.
void AddPackingCore(BuiltModel& b, const Instance& in) {
  auto& m = b.model;
  auto& ix = b.index;
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks(), D = in.num_destinations();
  const auto& dn = in.travel.destinations;
  ix.num_boxes = I;
  ix.num_pallets = J;
  ix.num_trucks = K;
  ix.num_destinations = D;

  auto& p0 = ix.Add("p0", {I, J});
  auto& u0 = ix.Add("u0", {J});
  auto& g1 = ix.Add("g1", {J, D});
  auto& p1 = ix.Add("p1", {J, K});
  auto& u1 = ix.Add("u1", {K});
  auto& eta = ix.Add("eta", {J, K, D});
  auto& g2 = ix.Add("g2", {K, D});
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) p0.at(i, j) = m.AddBinary(Join({"p0", in.boxes[i].id, in.pallets[j].id}));
  for (int j = 0; j < J; ++j) u0.at(j) = m.AddBinary(Join({"u0", in.pallets[j].id}));
  for (int j = 0; j < J; ++j)
    for (int d = 0; d < D; ++d) g1.at(j, d) = m.AddBinary(Join({"g1", in.pallets[j].id, dn[d + 1]}));
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k) p1.at(j, k) = m.AddBinary(Join({"p1", in.pallets[j].id, in.trucks[k].id}));
  for (int k = 0; k < K; ++k) u1.at(k) = m.AddBinary(Join({"u1", in.trucks[k].id}));
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      for (int d = 0; d < D; ++d)
        eta.at(j, k, d) = m.AddBinary(Join({"eta", in.pallets[j].id, in.trucks[k].id, dn[d + 1]}));
  for (int k = 0; k < K; ++k)
    for (int d = 0; d < D; ++d) g2.at(k, d) = m.AddBinary(Join({"g2", in.trucks[k].id, dn[d + 1]}));

  // Pallet capacity, box assignment, truck capacity, pallet-to-truck.
  for (int j = 0; j < J; ++j) {
    std::vector<Term> t;
    for (int i = 0; i < I; ++i) t.push_back(T(in.boxes[i].volume, p0(i, j)));
    t.push_back(T(-in.pallets[j].capacity, u0(j)));
    m.AddConstraint(Join({"pcap", in.pallets[j].id}), t, Sense::kLe, 0);
  }
  for (int i = 0; i < I; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < J; ++j) t.push_back(T(1, p0(i, j)));
    m.AddConstraint(Join({"assign", in.boxes[i].id}), t, Sense::kEq, 1);
  }
  for (int k = 0; k < K; ++k) {
    std::vector<Term> t;
    for (int j = 0; j < J; ++j) t.push_back(T(in.pallets[j].capacity, p1(j, k)));
    t.push_back(T(-in.trucks[k].capacity, u1(k)));
    m.AddConstraint(Join({"tcap", in.trucks[k].id}), t, Sense::kLe, 0);
  }
  for (int j = 0; j < J; ++j) {
    std::vector<Term> t;
    for (int k = 0; k < K; ++k) t.push_back(T(1, p1(j, k)));
    t.push_back(T(-1, u0(j)));
    m.AddConstraint(Join({"ptruck", in.pallets[j].id}), t, Sense::kEq, 0);
  }

  // A pallet calls at every destination of its boxes; a truck at every
  // destination of its pallets (eta = p1 AND g1).
  const Rational m_box = b.constants.m_pallet_destination;
  const Rational m_pal = b.constants.m_truck_destination;
  for (int j = 0; j < J; ++j) {
    for (int d = 0; d < D; ++d) {
      std::vector<Term> t;
      for (int i = 0; i < I; ++i)
        if (in.boxes[i].destination == d + 1) t.push_back(T(1, p0(i, j)));
      t.push_back(T(-m_box, g1(j, d)));
      m.AddConstraint(Join({"pdest", in.pallets[j].id, dn[d + 1]}), t, Sense::kLe, 0);
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      for (int d = 0; d < D; ++d) {
        const std::string tag = Join({in.pallets[j].id, in.trucks[k].id, dn[d + 1]});
        m.AddConstraint("etalo_" + tag, {T(2, eta(j, k, d)), T(-1, p1(j, k)), T(-1, g1(j, d))},
                        Sense::kLe, 0);
        m.AddConstraint("etahi_" + tag, {T(1, p1(j, k)), T(1, g1(j, d)), T(-1, eta(j, k, d))},
                        Sense::kLe, 1);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int d = 0; d < D; ++d) {
      std::vector<Term> t;
      for (int j = 0; j < J; ++j) t.push_back(T(1, eta(j, k, d)));
      t.push_back(T(-m_pal, g2(k, d)));
      m.AddConstraint(Join({"tdest", in.trucks[k].id, dn[d + 1]}), t, Sense::kLe, 0);
    }
  }
}

// Arc variables, arc allowance, degree and MTZ rows. `calls(k, d)` returns
// the term list standing for "truck k calls at d" (d = 0 is the depot);
// with fixed calling data it is a constant folded into the rhs.
struct CallRef {
  std::optional<VarId> var;
  int64_t constant = 0;
};

template <typename CallFn>
void AddRouting(BuiltModel& b, const Instance& in, CallFn calls) {
  auto& m = b.model;
  auto& ix = b.index;
  const int K = in.num_trucks(), D = in.num_destinations(), N = D + 1;
  const auto& dn = in.travel.destinations;
  ix.num_trucks = K;
  ix.num_destinations = D;
  auto& gs = ix.Add("gs", {K, N, N});
  auto& e = ix.Add("e", {K, D});
  for (int k = 0; k < K; ++k) {
    for (int a = 0; a < N; ++a) {
      for (int c = 0; c < N; ++c) {
        // Self-loops exist as variables but are fixed to 0.
        VarId id = m.AddVar(Join({"gs", in.trucks[k].id, dn[a], dn[c]}), VarKind::kBinary);
        if (a == c) m.SetBounds(id, Rational(0), Rational(0));
        gs.at(k, a, c) = id;
      }
    }
  }
  for (int k = 0; k < K; ++k)
    for (int d = 0; d < D; ++d)
      e.at(k, d) = m.AddVar(Join({"e", in.trucks[k].id, dn[d + 1]}), VarKind::kInteger, Rational(1),
                            Rational(D));

  // Appends coef * call(k, d) to t, folding constants into rhs.
  auto add_call = [&](std::vector<Term>& t, Rational& rhs, Rational coef, int k, int d) {
    CallRef r = calls(k, d);
    if (r.var) {
      t.push_back(T(coef, *r.var));
    } else {
      rhs -= coef * Rational(r.constant);
    }
  };

  for (int k = 0; k < K; ++k) {
    const std::string& kid = in.trucks[k].id;
    // An arc between two destinations needs the truck to call at both.
    for (int a = 1; a < N; ++a) {
      for (int c = 1; c < N; ++c) {
        if (a == c) continue;
        std::vector<Term> t{T(2, gs(k, a, c))};
        Rational rhs(0);
        add_call(t, rhs, -1, k, a);
        add_call(t, rhs, -1, k, c);
        m.AddConstraint(Join({"arc", kid, dn[a], dn[c]}), t, Sense::kLe, rhs);
      }
    }
    for (int d = 1; d < N; ++d) {
      std::vector<Term> t{T(1, gs(k, 0, d)), T(1, gs(k, d, 0))};
      Rational rhs(0);
      add_call(t, rhs, -2, k, d);
      m.AddConstraint(Join({"deparc", kid, dn[d]}), t, Sense::kLe, rhs);
    }
    // Enter and leave each called node exactly once.
    for (int c = 0; c < N; ++c) {
      std::vector<Term> t;
      for (int a = 0; a < N; ++a) t.push_back(T(1, gs(k, a, c)));
      Rational rhs(0);
      add_call(t, rhs, -1, k, c);
      m.AddConstraint(Join({"indeg", kid, dn[c]}), t, Sense::kEq, rhs);
    }
    for (int a = 0; a < N; ++a) {
      std::vector<Term> t;
      for (int c = 0; c < N; ++c) t.push_back(T(1, gs(k, a, c)));
      Rational rhs(0);
      add_call(t, rhs, -1, k, a);
      m.AddConstraint(Join({"outdeg", kid, dn[a]}), t, Sense::kEq, rhs);
    }
    // MTZ ordering over destination pairs; the depot is left out so routes can close.
    for (int a = 1; a < N; ++a) {
      for (int c = 1; c < N; ++c) {
        if (a == c) continue;
        m.AddConstraint(Join({"mtz", kid, dn[a], dn[c]}),
                        {T(1, e(k, a - 1)), T(-1, e(k, c - 1)), T(D, gs(k, a, c))}, Sense::kLe, D - 1);
      }
    }
  }
}

std::vector<Term> FixCostTerms(const BuiltModel& b, const Instance& in) {
  std::vector<Term> obj;
  for (int j = 0; j < in.num_pallets(); ++j) obj.push_back(T(in.pallets[j].fix_cost, b.index["u0"](j)));
  for (int k = 0; k < in.num_trucks(); ++k) obj.push_back(T(in.trucks[k].fix_cost, b.index["u1"](k)));
  return obj;
}

std::vector<Term> TravelTerms(const BuiltModel& b, const Instance& in) {
  std::vector<Term> obj;
  const int N = in.num_destinations() + 1;
  const auto& gs = b.index["gs"];
  for (int k = 0; k < in.num_trucks(); ++k)
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c)
        if (a != c) obj.push_back(T(in.travel(a, c), gs(k, a, c)));
  return obj;
}

int64_t MaxPalletDim(const Instance& in) {
  int64_t out = 0;
  for (const auto& p : in.pallets)
    if (p.dims) out = std::max({out, (*p.dims)[0], (*p.dims)[1], (*p.dims)[2]});
  return out;
}

int64_t MaxTruckDim(const Instance& in) {
  int64_t out = 0;
  for (const auto& t : in.trucks)
    if (t.floor) out = std::max({out, (*t.floor)[0], (*t.floor)[1]});
  for (const auto& p : in.pallets)
    if (p.dims) out = std::max({out, (*p.dims)[0], (*p.dims)[1]});
  return out;
}

Rational Value(const std::vector<Rational>& values, VarId id) {
  return id >= 0 && id < static_cast<VarId>(values.size()) ? values[id] : Rational(0);
}

}  // namespace

VarFamily::VarFamily(std::vector<int> shape) : shape_(std::move(shape)) {
  size_t n = 1;
  for (int s : shape_) n *= static_cast<size_t>(std::max(0, s));
  ids_.assign(n, -1);
}

size_t VarFamily::Flat(std::initializer_list<int> ix) const {
  if (ix.size() != shape_.size()) throw std::out_of_range("variable family: wrong arity");
  size_t flat = 0;
  size_t axis = 0;
  for (int v : ix) {
    if (v < 0 || v >= shape_[axis]) throw std::out_of_range("variable family: index out of range");
    flat = flat * shape_[axis] + v;
    ++axis;
  }
  return flat;
}

const VarFamily& VariableIndex::operator[](const std::string& symbol) const {
  auto it = families_.find(symbol);
  if (it == families_.end()) throw std::out_of_range("no variable family '" + symbol + "'");
  return it->second;
}

VarFamily& VariableIndex::Add(const std::string& symbol, std::vector<int> shape) {
  auto [it, inserted] = families_.emplace(symbol, VarFamily(std::move(shape)));
  if (!inserted) throw BuildError("variable family '" + symbol + "' added twice");
  return it->second;
}

std::string VariableIndex::ToJson() const {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["counts"] = {{"boxes", num_boxes},
                 {"pallets", num_pallets},
                 {"trucks", num_trucks},
                 {"destinations", num_destinations}};
  nlohmann::ordered_json fams = nlohmann::ordered_json::object();
  for (const auto& [name, fam] : families_) {
    fams[name] = {{"shape", fam.shape()}, {"ids", fam.ids()}};
  }
  j["families"] = fams;
  return j.dump() + "\n";
}

VariableIndex VariableIndex::FromJson(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  VariableIndex ix;
  ix.num_boxes = j.at("counts").at("boxes");
  ix.num_pallets = j.at("counts").at("pallets");
  ix.num_trucks = j.at("counts").at("trucks");
  ix.num_destinations = j.at("counts").at("destinations");
  for (const auto& [name, f] : j.at("families").items()) {
    auto& fam = ix.Add(name, f.at("shape").get<std::vector<int>>());
    auto ids = f.at("ids").get<std::vector<VarId>>();
    if (ids.size() != fam.size()) throw BuildError("index sidecar: family '" + name + "' has wrong size");
    fam.mutable_ids() = std::move(ids);
  }
  return ix;
}

ModelConstants ResolveConstants(const Instance& in, const ModelConfig& config) {
  ModelConstants c;
  c.epsilon = config.epsilon.value_or(Rational(1));
  if (c.epsilon <= Rational(0)) throw BuildError("epsilon must be positive");
  auto pick = [](const std::optional<Rational>& override_value, Rational tight, const char* what) {
    if (!override_value) return tight;
    if (*override_value < tight) {
      throw BuildError(std::string("big-M for ") + what + " is below the valid bound " + tight.ToString());
    }
    return *override_value;
  };
  c.m_pallet_destination = pick(config.bigm_pallet_destination, in.num_boxes(), "pallet destinations");
  c.m_truck_destination = pick(config.bigm_truck_destination, in.num_pallets(), "truck destinations");
  c.m_pallet_geometry = pick(config.bigm_pallet_geometry, MaxPalletDim(in) + c.epsilon, "pallet geometry");
  c.m_truck_geometry = pick(config.bigm_truck_geometry, MaxTruckDim(in) + c.epsilon, "truck geometry");
  return c;
}

std::vector<std::string> PrimaryFamilies() {
  return {"p0", "u0", "p1", "u1", "gs", "x0", "y0", "z0", "xh0", "yh0", "zh0", "r0",
          "x1", "y1", "xh1", "yh1", "r1"};
}

BuiltModel BuildBase1D(const Instance& in, const ModelConfig& config) {
  CheckInstance(in);
  BuiltModel b{ModelIR(in.name.empty() ? "twoscvrp" : in.name), {}, ResolveConstants(in, config)};
  AddPackingCore(b, in);
  const auto& u1 = b.index["u1"];
  const auto& g2 = b.index["g2"];
  // The depot is called iff the truck is used.
  AddRouting(b, in, [&](int k, int d) {
    return CallRef{d == 0 ? u1(k) : g2(k, d - 1), 0};
  });
  auto obj = FixCostTerms(b, in);
  auto travel = TravelTerms(b, in);
  obj.insert(obj.end(), travel.begin(), travel.end());
  b.model.SetObjective(obj);
  return b;
}

void ExtendPallet3D(BuiltModel& b, const Instance& in, const ModelConfig& config) {
  if (!in.is_3d()) throw BuildError("pallet geometry needs a 3D instance");
  auto& m = b.model;
  auto& ix = b.index;
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks();
  const Rational M = b.constants.m_pallet_geometry;
  const Rational eps = b.constants.epsilon;
  const char* lo_names[] = {"x0", "y0", "z0"};
  const char* hi_names[] = {"xh0", "yh0", "zh0"};
  const char* sep_names[] = {"xp0", "yp0", "zp0"};

  VarFamily* lo[3];
  VarFamily* hi[3];
  for (int a = 0; a < 3; ++a) {
    lo[a] = &ix.Add(lo_names[a], {I});
    hi[a] = &ix.Add(hi_names[a], {I});
  }
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < I; ++i) {
      lo[a]->at(i) = m.AddVar(Join({lo_names[a], in.boxes[i].id}), VarKind::kContinuous, Rational(0));
      hi[a]->at(i) = m.AddVar(Join({hi_names[a], in.boxes[i].id}), VarKind::kContinuous, Rational(0));
    }
  auto& r0 = ix.Add("r0", {I, 3, 3});
  for (int i = 0; i < I; ++i)
    for (int a = 0; a < 3; ++a)
      for (int s = 0; s < 3; ++s)
        r0.at(i, a, s) =
            m.AddBinary(Join({"r0", in.boxes[i].id, std::to_string(a + 1), std::to_string(s + 1)}));
  VarFamily* sep[3];
  for (int a = 0; a < 3; ++a) {
    sep[a] = &ix.Add(sep_names[a], {I, I});
    for (int i = 0; i < I; ++i)
      for (int i2 = 0; i2 < I; ++i2)
        if (i != i2)
          sep[a]->at(i, i2) = m.AddBinary(Join({sep_names[a], in.boxes[i].id, in.boxes[i2].id}));
  }
  const auto& p0 = ix["p0"];

  for (int i = 0; i < I; ++i) {
    const auto& box = in.boxes[i];
    for (int a = 0; a < 3; ++a) {
      // Stay inside the assigned pallet.
      std::vector<Term> t{T(1, (*hi[a])(i))};
      for (int j = 0; j < J; ++j) t.push_back(T(-(*in.pallets[j].dims)[a], p0(i, j)));
      m.AddConstraint(Join({std::string("psize") + kAxis3[a], box.id}), t, Sense::kLe, 0);
    }
    for (int a = 0; a < 3; ++a) {
      // Extent along axis a is whichever side r0 puts there.
      std::vector<Term> t{T(1, (*hi[a])(i)), T(-1, (*lo[a])(i))};
      for (int s = 0; s < 3; ++s) t.push_back(T(-(*box.dims)[s], r0(i, a, s)));
      m.AddConstraint(Join({std::string("pext") + kAxis3[a], box.id}), t, Sense::kEq, 0);
    }
    for (int s = 0; s < 3; ++s) {
      m.AddConstraint(Join({"prside", box.id, std::to_string(s + 1)}),
                      {T(1, r0(i, 0, s)), T(1, r0(i, 1, s)), T(1, r0(i, 2, s))}, Sense::kEq, 1);
    }
    for (int a = 0; a < 3; ++a) {
      m.AddConstraint(Join({"praxis", box.id, std::to_string(a + 1)}),
                      {T(1, r0(i, a, 0)), T(1, r0(i, a, 1)), T(1, r0(i, a, 2))}, Sense::kEq, 1);
    }
  }

  // Two boxes in the same pallet are apart along at least one axis.
  for (int i = 0; i < I; ++i) {
    for (int i2 = i + 1; i2 < I; ++i2) {
      for (int j = 0; j < J; ++j) {
        std::vector<Term> t;
        for (int a = 0; a < 3; ++a) {
          t.push_back(T(1, (*sep[a])(i, i2)));
          t.push_back(T(1, (*sep[a])(i2, i)));
        }
        t.push_back(T(-1, p0(i, j)));
        t.push_back(T(-1, p0(i2, j)));
        m.AddConstraint(Join({"pnonover", in.boxes[i].id, in.boxes[i2].id, in.pallets[j].id}), t,
                        Sense::kGe, -1);
      }
    }
  }
  // sep[a](i, i2) = 1  =>  hi(i2) <= lo(i);   sep = 0  =>  lo(i) + eps <= hi(i2).
  // The z companion is only added when faithful_z is off.
  for (int i = 0; i < I; ++i) {
    for (int i2 = 0; i2 < I; ++i2) {
      if (i == i2) continue;
      const std::string tag = Join({in.boxes[i].id, in.boxes[i2].id});
      for (int a = 0; a < 3; ++a) {
        const std::string axis = kAxis3[a];
        m.AddConstraint("psep" + axis + "a_" + tag,
                        {T(1, (*hi[a])(i2)), T(-1, (*lo[a])(i)), T(M, (*sep[a])(i, i2))}, Sense::kLe, M);
        if (a < 2 || !config.faithful_z) {
          m.AddConstraint("psep" + axis + "b_" + tag,
                          {T(1, (*lo[a])(i)), T(-1, (*hi[a])(i2)), T(-M, (*sep[a])(i, i2))},
                          Sense::kLe, -eps);
        }
      }
    }
  }

  if (!ix.Has("gs")) return;  // packing-only: no delivery order

  auto& pg = ix.Add("pg", {I, K});
  auto& th0 = ix.Add("th0", {I, I});
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < K; ++k) pg.at(i, k) = m.AddBinary(Join({"pg", in.boxes[i].id, in.trucks[k].id}));
  for (int i = 0; i < I; ++i)
    for (int i2 = 0; i2 < I; ++i2)
      if (i != i2) th0.at(i, i2) = m.AddBinary(Join({"th0", in.boxes[i].id, in.boxes[i2].id}));
  const auto& p1 = ix["p1"];
  const auto& gs = ix["gs"];
  // pg(i,k) >= p0(i,j) AND p1(j,k). The upper direction of this AND is
  // not emitted: quantified over every pallet it would contradict the
  // lower direction (see README, model notes).
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      for (int k = 0; k < K; ++k)
        m.AddConstraint(Join({"pgand", in.boxes[i].id, in.pallets[j].id, in.trucks[k].id}),
                        {T(1, p0(i, j)), T(1, p1(j, k)), T(-1, pg(i, k))}, Sense::kLe, 1);
  // th0(i,i2) >= 1 when truck k drives dest(i) -> dest(i2) with both boxes
  // aboard. Rows whose destination product is 0 can never bind and are skipped.
  for (int i = 0; i < I; ++i) {
    for (int i2 = 0; i2 < I; ++i2) {
      if (i == i2) continue;
      const int d = in.boxes[i].destination, d2 = in.boxes[i2].destination;
      for (int k = 0; k < K; ++k) {
        m.AddConstraint(Join({"th0and", in.boxes[i].id, in.boxes[i2].id, in.trucks[k].id}),
                        {T(1, gs(k, d, d2)), T(1, pg(i, k)), T(1, pg(i2, k)), T(-1, th0(i, i2))},
                        Sense::kLe, 2);
      }
    }
  }
  const auto& zp = *sep[2];
  for (int i = 0; i < I; ++i) {
    for (int i2 = 0; i2 < I; ++i2) {
      if (i == i2) continue;
      for (int j = 0; j < J; ++j) {
        const std::string name = Join({"stack", in.boxes[i].id, in.boxes[i2].id, in.pallets[j].id});
        Rational zc = config.stacking == StackingRule::kLiteral ? Rational(3) : Rational(1);
        m.AddConstraint(name, {T(1, th0(i, i2)), T(1, p0(i, j)), T(1, p0(i2, j)), T(zc, zp(i2, i))},
                        Sense::kLe, 3);
      }
    }
  }
}

void ExtendTruck2D(BuiltModel& b, const Instance& in, const ModelConfig& config) {
  if (!in.is_3d()) throw BuildError("truck geometry needs pallet and truck dimensions");
  auto& m = b.model;
  auto& ix = b.index;
  const int J = in.num_pallets(), K = in.num_trucks(), D = in.num_destinations();
  const Rational M = b.constants.m_truck_geometry;
  const Rational eps = b.constants.epsilon;
  const char* lo_names[] = {"x1", "y1"};
  const char* hi_names[] = {"xh1", "yh1"};
  const char* sep_names[] = {"xp1", "yp1"};
  VarFamily* lo[2];
  VarFamily* hi[2];
  for (int a = 0; a < 2; ++a) {
    lo[a] = &ix.Add(lo_names[a], {J});
    hi[a] = &ix.Add(hi_names[a], {J});
  }
  for (int a = 0; a < 2; ++a)
    for (int j = 0; j < J; ++j) {
      lo[a]->at(j) = m.AddVar(Join({lo_names[a], in.pallets[j].id}), VarKind::kContinuous, Rational(0));
      hi[a]->at(j) = m.AddVar(Join({hi_names[a], in.pallets[j].id}), VarKind::kContinuous, Rational(0));
    }
  auto& r1 = ix.Add("r1", {J, 2, 2});
  for (int j = 0; j < J; ++j)
    for (int a = 0; a < 2; ++a)
      for (int s = 0; s < 2; ++s)
        r1.at(j, a, s) =
            m.AddBinary(Join({"r1", in.pallets[j].id, std::to_string(a + 1), std::to_string(s + 1)}));
  VarFamily* sep[2];
  for (int a = 0; a < 2; ++a) {
    sep[a] = &ix.Add(sep_names[a], {J, J});
    for (int j = 0; j < J; ++j)
      for (int j2 = 0; j2 < J; ++j2)
        if (j != j2) sep[a]->at(j, j2) = m.AddBinary(Join({sep_names[a], in.pallets[j].id, in.pallets[j2].id}));
  }
  const auto& p1 = ix["p1"];
  const auto& u0 = ix["u0"];

  for (int j = 0; j < J; ++j) {
    const auto& pal = in.pallets[j];
    for (int a = 0; a < 2; ++a) {
      // Unused pallets get M of slack so their coordinates stay feasible.
      std::vector<Term> t{T(1, (*hi[a])(j)), T(M, u0(j))};
      for (int k = 0; k < K; ++k) t.push_back(T(-(*in.trucks[k].floor)[a], p1(j, k)));
      m.AddConstraint(Join({std::string("tsize") + kAxis3[a], pal.id}), t, Sense::kLe, M);
    }
    for (int a = 0; a < 2; ++a) {
      std::vector<Term> t{T(1, (*hi[a])(j)), T(-1, (*lo[a])(j))};
      for (int s = 0; s < 2; ++s) t.push_back(T(-(*pal.dims)[s], r1(j, a, s)));
      m.AddConstraint(Join({std::string("text") + kAxis3[a], pal.id}), t, Sense::kEq, 0);
    }
    for (int s = 0; s < 2; ++s)
      m.AddConstraint(Join({"trside", pal.id, std::to_string(s + 1)}), {T(1, r1(j, 0, s)), T(1, r1(j, 1, s))},
                      Sense::kEq, 1);
    for (int a = 0; a < 2; ++a)
      m.AddConstraint(Join({"traxis", pal.id, std::to_string(a + 1)}), {T(1, r1(j, a, 0)), T(1, r1(j, a, 1))},
                      Sense::kEq, 1);
  }
  for (int j = 0; j < J; ++j) {
    for (int j2 = j + 1; j2 < J; ++j2) {
      for (int k = 0; k < K; ++k) {
        std::vector<Term> t;
        for (int a = 0; a < 2; ++a) {
          t.push_back(T(1, (*sep[a])(j, j2)));
          t.push_back(T(1, (*sep[a])(j2, j)));
        }
        t.push_back(T(-1, p1(j, k)));
        t.push_back(T(-1, p1(j2, k)));
        m.AddConstraint(Join({"tnonover", in.pallets[j].id, in.pallets[j2].id, in.trucks[k].id}), t,
                        Sense::kGe, -1);
      }
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int j2 = 0; j2 < J; ++j2) {
      if (j == j2) continue;
      const std::string tag = Join({in.pallets[j].id, in.pallets[j2].id});
      for (int a = 0; a < 2; ++a) {
        const std::string axis = kAxis3[a];
        m.AddConstraint("tsep" + axis + "a_" + tag,
                        {T(1, (*hi[a])(j2)), T(-1, (*lo[a])(j)), T(M, (*sep[a])(j, j2))}, Sense::kLe, M);
        if (a == 0 || !config.faithful_z) {
          m.AddConstraint("tsep" + axis + "b_" + tag,
                          {T(1, (*lo[a])(j)), T(-1, (*hi[a])(j2)), T(-M, (*sep[a])(j, j2))}, Sense::kLe,
                          -eps);
        }
      }
    }
  }

  if (!ix.Has("gs")) return;

  const auto& dn = in.travel.destinations;
  const auto& g1 = ix["g1"];
  const auto& gs = ix["gs"];
  auto& gdd = ix.Add("gdd", {J, J, D, D});
  auto& th1 = ix.Add("th1", {J, J});
  for (int j = 0; j < J; ++j)
    for (int j2 = 0; j2 < J; ++j2) {
      if (j == j2) continue;
      for (int d = 0; d < D; ++d)
        for (int d2 = 0; d2 < D; ++d2)
          gdd.at(j, j2, d, d2) =
              m.AddBinary(Join({"gdd", in.pallets[j].id, in.pallets[j2].id, dn[d + 1], dn[d2 + 1]}));
    }
  for (int j = 0; j < J; ++j)
    for (int j2 = 0; j2 < J; ++j2)
      if (j != j2) th1.at(j, j2) = m.AddBinary(Join({"th1", in.pallets[j].id, in.pallets[j2].id}));

  for (int j = 0; j < J; ++j) {
    for (int j2 = 0; j2 < J; ++j2) {
      if (j == j2) continue;
      for (int d = 0; d < D; ++d) {
        for (int d2 = 0; d2 < D; ++d2) {
          const std::string tag = Join({in.pallets[j].id, in.pallets[j2].id, dn[d + 1], dn[d2 + 1]});
          m.AddConstraint("gddlo_" + tag, {T(2, gdd(j, j2, d, d2)), T(-1, g1(j, d)), T(-1, g1(j2, d2))},
                          Sense::kLe, 0);
          m.AddConstraint("gddhi_" + tag, {T(1, g1(j, d)), T(1, g1(j2, d2)), T(-1, gdd(j, j2, d, d2))},
                          Sense::kLe, 1);
        }
      }
      // th1 >= 1 when truck k drives d -> d2 carrying j (to d) and j2 (to d2).
      // Only the forcing direction is emitted, as for th0; d == d2 rows are vacuous.
      for (int k = 0; k < K; ++k) {
        for (int d = 0; d < D; ++d) {
          for (int d2 = 0; d2 < D; ++d2) {
            if (d == d2) continue;
            m.AddConstraint(
                Join({"th1and", in.pallets[j].id, in.pallets[j2].id, in.trucks[k].id, dn[d + 1], dn[d2 + 1]}),
                {T(1, gs(k, d + 1, d2 + 1)), T(1, gdd(j, j2, d, d2)), T(1, p1(j, k)), T(1, p1(j2, k)),
                 T(-1, th1(j, j2))},
                Sense::kLe, 3);
          }
        }
      }
      // The earlier pallet may not lie to the right of the one delivered next.
      m.AddConstraint(Join({"order", in.pallets[j].id, in.pallets[j2].id}),
                      {T(1, th1(j, j2)), T(1, (*sep[0])(j, j2))}, Sense::kLe, 1);
    }
  }
}

BuiltModel BuildFull(const Instance& in, const ModelConfig& config) {
  BuiltModel b = BuildBase1D(in, config);
  if (Has3D(in, config)) {
    ExtendPallet3D(b, in, config);
    ExtendTruck2D(b, in, config);
  }
  return b;
}

BuiltModel BuildPackingOnly(const Instance& in, const ModelConfig& config) {
  CheckInstance(in);
  BuiltModel b{ModelIR(in.name.empty() ? "twoscvrp_packing" : in.name + "_packing"), {},
               ResolveConstants(in, config)};
  AddPackingCore(b, in);
  if (Has3D(in, config)) {
    ExtendPallet3D(b, in, config);
    ExtendTruck2D(b, in, config);
  }
  b.model.SetObjective(FixCostTerms(b, in));
  return b;
}

BuiltModel BuildRoutingOnly(const Instance& in, const RoutingFix& fix, const ModelConfig& config) {
  CheckInstance(in);
  const int K = in.num_trucks(), D = in.num_destinations();
  if (static_cast<int>(fix.used.size()) != K || static_cast<int>(fix.calling.size()) != K) {
    throw BuildError("routing fix: need one entry per truck");
  }
  for (int k = 0; k < K; ++k) {
    if (static_cast<int>(fix.calling[k].size()) != D) throw BuildError("routing fix: need one flag per destination");
    bool any = std::any_of(fix.calling[k].begin(), fix.calling[k].end(), [](bool c) { return c; });
    if (any && !fix.used[k]) {
      throw BuildError("routing fix: truck " + in.trucks[k].id + " calls somewhere but is not used");
    }
  }
  BuiltModel b{ModelIR(in.name.empty() ? "twoscvrp_routing" : in.name + "_routing"), {},
               ResolveConstants(in, config)};
  AddRouting(b, in, [&](int k, int d) {
    return CallRef{std::nullopt, d == 0 ? int64_t(fix.used[k]) : int64_t(fix.calling[k][d - 1])};
  });
  b.model.SetObjective(TravelTerms(b, in));
  return b;
}

Solution Decode(const VariableIndex& ix, const std::vector<Rational>& values, const Instance& in) {
  // Integer-valued reads round within 1e-6 and reject anything further off.
  auto read_int = [&](VarId id) -> int64_t {
    Rational v = Value(values, id);
    if (v.is_integer()) return v.num();
    double d = v.ToDouble();
    double r = std::nearbyint(d);
    if (std::abs(d - r) > 1e-6) throw DecodeError("non-integral value " + v.ToString() + " for variable id " + std::to_string(id));
    return static_cast<int64_t>(r);
  };
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks(), D = in.num_destinations();
  Solution s;
  if (ix.Has("p0")) {
    const auto& p0 = ix["p0"];
    s.box_to_pallet.assign(I, -1);
    for (int i = 0; i < I; ++i)
      for (int j = 0; j < J; ++j)
        if (read_int(p0(i, j)) == 1 && s.box_to_pallet[i] < 0) s.box_to_pallet[i] = j;
  }
  if (ix.Has("p1")) {
    const auto& p1 = ix["p1"];
    const auto& u0 = ix["u0"];
    s.pallet_to_truck.assign(J, -1);
    for (int j = 0; j < J; ++j) {
      if (read_int(u0(j)) != 1) continue;
      for (int k = 0; k < K; ++k)
        if (read_int(p1(j, k)) == 1) {
          s.pallet_to_truck[j] = k;
          break;
        }
    }
  }
  s.routes.assign(K, {});
  if (ix.Has("gs")) {
    const auto& gs = ix["gs"];
    const int N = D + 1;
    for (int k = 0; k < K; ++k) {
      std::vector<int> next(N, -1);
      int arcs = 0;
      for (int a = 0; a < N; ++a)
        for (int c = 0; c < N; ++c)
          if (read_int(gs(k, a, c)) == 1) {
            if (next[a] >= 0) throw DecodeError("truck " + in.trucks[k].id + " leaves a node twice");
            next[a] = c;
            ++arcs;
          }
      if (arcs == 0) continue;
      if (next[0] < 0) throw DecodeError("truck " + in.trucks[k].id + " has arcs that never touch the depot");
      std::vector<int> route{0};
      int cur = 0;
      do {
        cur = next[cur];
        if (cur < 0 || static_cast<int>(route.size()) > N) {
          throw DecodeError("truck " + in.trucks[k].id + " route does not return to the depot");
        }
        route.push_back(cur);
      } while (cur != 0);
      if (static_cast<int>(route.size()) - 1 != arcs) {
        throw DecodeError("truck " + in.trucks[k].id + " has a subtour off the depot cycle");
      }
      s.routes[k] = route;
    }
  }
  if (ix.Has("x0")) {
    const char* lo_names[] = {"x0", "y0", "z0"};
    const char* hi_names[] = {"xh0", "yh0", "zh0"};
    const auto& r0 = ix["r0"];
    std::vector<Placement3D> places(I);
    for (int i = 0; i < I; ++i) {
      for (int a = 0; a < 3; ++a) {
        places[i].lo[a] = Value(values, ix[lo_names[a]](i));
        places[i].hi[a] = Value(values, ix[hi_names[a]](i));
        places[i].rotation[a] = -1;
        for (int sd = 0; sd < 3; ++sd)
          if (read_int(r0(i, a, sd)) == 1) places[i].rotation[a] = sd;
      }
    }
    s.boxes_3d = std::move(places);
  }
  if (ix.Has("x1")) {
    const char* lo_names[] = {"x1", "y1"};
    const char* hi_names[] = {"xh1", "yh1"};
    const auto& r1 = ix["r1"];
    std::vector<Placement2D> places(J);
    for (int j = 0; j < J; ++j) {
      if (!s.pallet_to_truck.empty() && s.pallet_to_truck[j] < 0) continue;
      for (int a = 0; a < 2; ++a) {
        places[j].lo[a] = Value(values, ix[lo_names[a]](j));
        places[j].hi[a] = Value(values, ix[hi_names[a]](j));
        places[j].rotation[a] = -1;
        for (int sd = 0; sd < 2; ++sd)
          if (read_int(r1(j, a, sd)) == 1) places[j].rotation[a] = sd;
      }
    }
    s.pallets_2d = std::move(places);
  }
  s.total_cost = SolutionCost(in, s);
  return s;
}

std::vector<Rational> Encode(const BuiltModel& b, const Instance& in, const Solution& s,
                             const ModelConfig& config) {
  const auto& ix = b.index;
  std::vector<Rational> x(b.model.num_vars(), Rational(0));
  auto set = [&](VarId id, Rational v) {
    if (id >= 0) x[id] = v;
  };
  const int I = in.num_boxes(), J = in.num_pallets(), K = in.num_trucks(), D = in.num_destinations();
  auto pallet_of = [&](int i) { return i < static_cast<int>(s.box_to_pallet.size()) ? s.box_to_pallet[i] : -1; };
  auto truck_of = [&](int j) {
    return j >= 0 && j < static_cast<int>(s.pallet_to_truck.size()) ? s.pallet_to_truck[j] : -1;
  };
  auto route_of = [&](int k) -> const std::vector<int>& {
    static const std::vector<int> kEmpty;
    return k < static_cast<int>(s.routes.size()) ? s.routes[k] : kEmpty;
  };
  // pallet j carries a box for destination d (1-based)
  std::vector<std::vector<bool>> pallet_dest(J, std::vector<bool>(D + 1, false));
  for (int i = 0; i < I; ++i) {
    int j = pallet_of(i);
    if (j >= 0 && j < J) pallet_dest[j][in.boxes[i].destination] = true;
  }
  // arc[k][a][c]
  std::vector<std::vector<std::vector<bool>>> arc(
      K, std::vector<std::vector<bool>>(D + 1, std::vector<bool>(D + 1, false)));
  for (int k = 0; k < K; ++k) {
    const auto& r = route_of(k);
    for (size_t p = 0; p + 1 < r.size(); ++p) {
      if (r[p] >= 0 && r[p] <= D && r[p + 1] >= 0 && r[p + 1] <= D) arc[k][r[p]][r[p + 1]] = true;
    }
  }

  if (ix.Has("p0")) {
    for (int i = 0; i < I; ++i)
      for (int j = 0; j < J; ++j) set(ix["p0"](i, j), pallet_of(i) == j ? 1 : 0);
    for (int j = 0; j < J; ++j) {
      set(ix["u0"](j), truck_of(j) >= 0 ? 1 : 0);
      for (int k = 0; k < K; ++k) set(ix["p1"](j, k), truck_of(j) == k ? 1 : 0);
      for (int d = 0; d < D; ++d) set(ix["g1"](j, d), pallet_dest[j][d + 1] ? 1 : 0);
      for (int k = 0; k < K; ++k)
        for (int d = 0; d < D; ++d) set(ix["eta"](j, k, d), truck_of(j) == k && pallet_dest[j][d + 1] ? 1 : 0);
    }
    for (int k = 0; k < K; ++k) {
      set(ix["u1"](k), route_of(k).empty() ? 0 : 1);
      for (int d = 0; d < D; ++d) {
        const auto& r = route_of(k);
        set(ix["g2"](k, d), std::find(r.begin(), r.end(), d + 1) != r.end() ? 1 : 0);
      }
    }
  }
  if (ix.Has("gs")) {
    for (int k = 0; k < K; ++k) {
      for (int a = 0; a <= D; ++a)
        for (int c = 0; c <= D; ++c) set(ix["gs"](k, a, c), arc[k][a][c] ? 1 : 0);
      for (int d = 0; d < D; ++d) set(ix["e"](k, d), 1);
      const auto& r = route_of(k);
      for (size_t p = 1; p + 1 < r.size(); ++p)
        if (r[p] >= 1 && r[p] <= D) set(ix["e"](k, r[p] - 1), static_cast<int64_t>(p));
    }
  }

  // th0 / th1 as the model forces them: consecutive destinations on one truck.
  auto consecutive = [&](int k, int d, int d2) { return k >= 0 && k < K && d != d2 && arc[k][d][d2]; };

  if (ix.Has("x0")) {
    const char* lo_names[] = {"x0", "y0", "z0"};
    const char* hi_names[] = {"xh0", "yh0", "zh0"};
    std::vector<Placement3D> pl(I);
    if (s.boxes_3d && static_cast<int>(s.boxes_3d->size()) == I) pl = *s.boxes_3d;
    for (int i = 0; i < I; ++i) {
      for (int a = 0; a < 3; ++a) {
        set(ix[lo_names[a]](i), pl[i].lo[a]);
        set(ix[hi_names[a]](i), pl[i].hi[a]);
        for (int sd = 0; sd < 3; ++sd) set(ix["r0"](i, a, sd), pl[i].rotation[a] == sd ? 1 : 0);
      }
    }
    auto truck_of_box = [&](int i) { return truck_of(pallet_of(i)); };
    auto theta0 = [&](int i, int i2) {
      int k = truck_of_box(i);
      return k >= 0 && k == truck_of_box(i2) &&
             consecutive(k, in.boxes[i].destination, in.boxes[i2].destination);
    };
    const bool routed = ix.Has("th0");
    for (int i = 0; i < I; ++i) {
      for (int i2 = 0; i2 < I; ++i2) {
        if (i == i2) continue;
        set(ix["xp0"](i, i2), pl[i2].hi[0] <= pl[i].lo[0] ? 1 : 0);
        set(ix["yp0"](i, i2), pl[i2].hi[1] <= pl[i].lo[1] ? 1 : 0);
        bool above = pl[i2].hi[2] <= pl[i].lo[2];
        bool z = above;
        if (config.faithful_z && routed) {
          // One-sided: leave z at 0 wherever the stacking row would forbid it.
          if (config.stacking == StackingRule::kLiteral) {
            z = false;
          } else if (pallet_of(i) == pallet_of(i2) && theta0(i2, i)) {
            z = false;
          }
        }
        set(ix["zp0"](i, i2), z ? 1 : 0);
        if (routed) set(ix["th0"](i, i2), theta0(i, i2) ? 1 : 0);
      }
      if (routed)
        for (int k = 0; k < K; ++k) set(ix["pg"](i, k), truck_of_box(i) == k ? 1 : 0);
    }
  }
  if (ix.Has("x1")) {
    const char* lo_names[] = {"x1", "y1"};
    const char* hi_names[] = {"xh1", "yh1"};
    std::vector<Placement2D> pl(J);
    if (s.pallets_2d && static_cast<int>(s.pallets_2d->size()) == J) pl = *s.pallets_2d;
    for (int j = 0; j < J; ++j) {
      if (truck_of(j) < 0) {
        const auto& dims = *in.pallets[j].dims;
        pl[j] = Placement2D{{0, 0}, {dims[0], dims[1]}, {0, 1}};
      }
      for (int a = 0; a < 2; ++a) {
        set(ix[lo_names[a]](j), pl[j].lo[a]);
        set(ix[hi_names[a]](j), pl[j].hi[a]);
        for (int sd = 0; sd < 2; ++sd) set(ix["r1"](j, a, sd), pl[j].rotation[a] == sd ? 1 : 0);
      }
    }
    for (int j = 0; j < J; ++j) {
      for (int j2 = 0; j2 < J; ++j2) {
        if (j == j2) continue;
        set(ix["xp1"](j, j2), pl[j2].hi[0] <= pl[j].lo[0] ? 1 : 0);
        set(ix["yp1"](j, j2), pl[j2].hi[1] <= pl[j].lo[1] ? 1 : 0);
        if (!ix.Has("th1")) continue;
        bool theta = false;
        for (int d = 1; d <= D; ++d) {
          for (int d2 = 1; d2 <= D; ++d2) {
            bool both = pallet_dest[j][d] && pallet_dest[j2][d2];
            set(ix["gdd"](j, j2, d - 1, d2 - 1), both ? 1 : 0);
            int k = truck_of(j);
            if (both && k >= 0 && k == truck_of(j2) && consecutive(k, d, d2)) theta = true;
          }
        }
        set(ix["th1"](j, j2), theta ? 1 : 0);
      }
    }
  }
  return x;
}

}  // namespace twoscvrp
