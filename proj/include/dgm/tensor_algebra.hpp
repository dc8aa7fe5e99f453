#ifndef DGM_TENSOR_ALGEBRA_HPP
#define DGM_TENSOR_ALGEBRA_HPP

#include <limits>
#include <set>

#include "adjunction.hpp"
#include "rng.hpp"

namespace dgm {

// ---------------------------------------------------------------------------
// Noncommutative polynomials over generator words

using Word = std::vector<int>;  // generator ids, concatenation = product

struct Poly {
  std::map<Word, Scalar> terms;  // normalized: no zero coefficients

  bool is_zero() const { return terms.empty(); }

  void add_term(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
      terms.emplace(w, c);
      return;
    }
    Scalar s = it->second + c;
    if (s.is_zero()) terms.erase(it);
    else it->second = s;
  }

  Poly scaled(const Scalar& c) const {
    Poly out;
    for (const auto& [w, a] : terms) out.add_term(w, a * c);
    return out;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [w, c] : b.terms) out.add_term(w, c);
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
};

inline Poly pmul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  return out;
}

inline Poly pword(const Word& w, const Scalar& c) {
  Poly out;
  out.add_term(w, c);
  return out;
}

// ---------------------------------------------------------------------------
// Semifree algebras: free on listed generators, derivation differential

class SemifreeAlgebra {
 public:
  SemifreeAlgebra() = default;

  SemifreeAlgebra(Field f, std::vector<std::string> labels, std::vector<int> degs,
                  std::vector<Poly> dgen)
      : field_(std::move(f)), labels_(std::move(labels)), degs_(std::move(degs)),
        dgen_(std::move(dgen)) {
    if (labels_.size() != degs_.size() || labels_.size() != dgen_.size())
      throw precondition_error("semifree: generator data sizes differ");
    std::set<std::string> seen;
    for (size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty() || !seen.insert(labels_[i]).second)
        throw precondition_error("semifree: generator labels must be distinct and nonempty");
      if (degs_[i] < 0) throw precondition_error("semifree: generator degrees must be >= 0");
    }
    for (size_t i = 0; i < labels_.size(); ++i) by_degree_[degs_[i]].push_back(static_cast<int>(i));
    for (size_t i = 0; i < dgen_.size(); ++i) {
      for (const auto& [w, c] : dgen_[i].terms) {
        if (word_degree(w) != degs_[i] + 1)
          throw precondition_error("semifree: differential is not homogeneous of degree +1");
      }
      if (!d_of(dgen_[i]).is_zero()) throw precondition_error("semifree: d^2 != 0 on generator " + labels_[i]);
    }
  }

  const Field& field() const { return field_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  int deg(int i) const { return degs_[i]; }
  const Poly& dgen(int i) const { return dgen_[i]; }

  bool honest() const {
    for (int d : degs_)
      if (d == 0) return false;
    return true;
  }

  int word_degree(const Word& w) const {
    int z = 0;
    for (int g : w) {
      if (g < 0 || g >= size()) throw precondition_error("word references unknown generator");
      z += degs_[g];
    }
    return z;
  }

  /// Derivation extension of the generator differentials, right-action
  /// Leibniz: (xy)d = x(yd) + (-1)^{|y|}(xd)y.
  Poly d_of(const Poly& p) const {
    Poly out;
    for (const auto& [w, c] : p.terms) {
      int suffix = 0;
      for (int i = static_cast<int>(w.size()); i-- > 0;) {
        Scalar sign = Scalar::from_int(field_, suffix % 2 ? -1 : 1);
        for (const auto& [dw, dc] : dgen_[w[i]].terms) {
          Word nw(w.begin(), w.begin() + i);
          nw.insert(nw.end(), dw.begin(), dw.end());
          nw.insert(nw.end(), w.begin() + i + 1, w.end());
          out.add_term(nw, c * dc * sign);
        }
        suffix += degs_[w[i]];
      }
    }
    return out;
  }

  /// All words of total degree z in a fixed deterministic order; requires
  /// every generator degree >= 1 (else infinitely many words per degree).
  const std::vector<Word>& words(int z) const {
    auto it = wcache_.find(z);
    if (it != wcache_.end()) return it->second;
    if (!honest())
      throw precondition_error("semifree: cannot enumerate words with a degree-0 generator");
    std::vector<Word> out;
    if (z == 0) out.push_back({});
    if (z > 0) {
      for (int g = 0; g < size(); ++g) {
        if (degs_[g] > z) continue;
        for (const Word& rest : words(z - degs_[g])) {
          Word w{g};
          w.insert(w.end(), rest.begin(), rest.end());
          out.push_back(std::move(w));
        }
      }
    }
    auto& slot = wcache_[z] = std::move(out);
    auto& idx = wicache_[z];
    for (size_t i = 0; i < slot.size(); ++i) idx.emplace(slot[i], static_cast<int>(i));
    return slot;
  }

  int word_index(int z, const Word& w) const {
    words(z);
    const auto& idx = wicache_.at(z);
    auto it = idx.find(w);
    if (it == idx.end()) throw precondition_error("word_index: word not of this degree");
    return it->second;
  }

  std::string word_label(const Word& w) const {
    std::string s = "w";
    for (size_t i = 0; i < w.size(); ++i) s += (i ? "_" : "") + std::to_string(w[i]);
    return s;
  }

  friend bool operator==(const SemifreeAlgebra& a, const SemifreeAlgebra& b) {
    return a.field_ == b.field_ && a.labels_ == b.labels_ && a.degs_ == b.degs_ &&
           a.dgen_ == b.dgen_;
  }
  friend bool operator!=(const SemifreeAlgebra& a, const SemifreeAlgebra& b) { return !(a == b); }

 private:
  Field field_{};
  std::vector<std::string> labels_;
  std::vector<int> degs_;
  std::vector<Poly> dgen_;
  std::map<int, std::vector<int>> by_degree_;
  mutable std::map<int, std::vector<Word>> wcache_;
  mutable std::map<int, std::map<Word, int>> wicache_;
};

/// Algebra morphism: determined by generator images, checked to preserve
/// degree and commute with the derivations.
class AlgMor {
 public:
  AlgMor() = default;

  /// The chain condition is verified for generators whose differential is
  /// fully represented, i.e. of degree < check_below; window-truncated
  /// presentations have unverifiable generators at the window edge.
  AlgMor(SemifreeAlgebra src, SemifreeAlgebra tgt, std::vector<Poly> images,
         int check_below = std::numeric_limits<int>::max())
      : src_(std::move(src)), tgt_(std::move(tgt)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != src_.size())
      throw precondition_error("algebra map: one image per generator required");
    for (int i = 0; i < src_.size(); ++i)
      for (const auto& [w, c] : images_[i].terms)
        if (tgt_.word_degree(w) != src_.deg(i))
          throw precondition_error("algebra map: image not homogeneous of the right degree");
    for (int i = 0; i < src_.size(); ++i)
      if (src_.deg(i) + 1 <= check_below && apply(src_.dgen(i)) != tgt_.d_of(images_[i]))
        throw field_error("algebra map does not commute with d at generator " + src_.label(i));
  }

  const SemifreeAlgebra& src() const { return src_; }
  const SemifreeAlgebra& tgt() const { return tgt_; }
  const std::vector<Poly>& images() const { return images_; }

  Poly apply(const Poly& p) const {
    Poly out;
    for (const auto& [w, c] : p.terms) {
      Poly acc = pword({}, Scalar::one(src_.field()));
      for (int g : w) acc = pmul(acc, images_[g]);
      out = out + acc.scaled(c);
    }
    return out;
  }

  static AlgMor identity(const SemifreeAlgebra& a) {
    std::vector<Poly> im;
    for (int i = 0; i < a.size(); ++i) im.push_back(pword({i}, Scalar::one(a.field())));
    return AlgMor(a, a, std::move(im));
  }

  friend bool operator==(const AlgMor& a, const AlgMor& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.images_ == b.images_;
  }
  friend bool operator!=(const AlgMor& a, const AlgMor& b) { return !(a == b); }

 private:
  SemifreeAlgebra src_, tgt_;
  std::vector<Poly> images_;
};

inline AlgMor compose(const AlgMor& f, const AlgMor& g,
                      int check_below = std::numeric_limits<int>::max()) {
  if (f.tgt() != g.src()) throw field_error("algebra map composition type mismatch");
  std::vector<Poly> im;
  for (const Poly& p : f.images()) im.push_back(g.apply(p));
  return AlgMor(f.src(), g.tgt(), std::move(im), check_below);
}

// ---------------------------------------------------------------------------
// The tensor-algebra adjunction instance: F = free dg-algebra on a module,
// U = underlying module (words), exact within degrees [0, cap].

struct window_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class TensorInstance {
 public:
  using Obj = SemifreeAlgebra;
  using Mor = AlgMor;

  TensorInstance(const Field& f, int cap, std::string index = "x")
      : field_(f), cap_(cap), indices_{std::move(index)} {
    if (cap_ < 1) throw precondition_error("tensor instance: cap must be >= 1");
  }

  const std::vector<std::string>& indices() const { return indices_; }
  const Field& field() const { return field_; }
  int cap() const { return cap_; }

  DgFam U_ob(const Obj& a) const {
    if (a.field() != field_) throw field_error("tensor instance: field mismatch");
    std::map<int, std::vector<std::string>> basis;
    for (int z = 0; z <= cap_; ++z) {
      std::vector<std::string> lab;
      for (const Word& w : a.words(z)) lab.push_back(a.word_label(w));
      if (!lab.empty()) basis[z] = std::move(lab);
    }
    GradedModule gm(field_, basis);
    HomMap d(gm, gm, 1);
    for (int z = 0; z < cap_; ++z) {
      int rows = static_cast<int>(a.words(z).size());
      int cols = static_cast<int>(a.words(z + 1).size());
      if (rows == 0 || cols == 0) continue;
      Mat m(field_, rows, cols);
      for (int i = 0; i < rows; ++i) {
        Poly dp = a.d_of(pword(a.words(z)[i], Scalar::one(field_)));
        for (const auto& [w, c] : dp.terms) m.at(i, a.word_index(z + 1, w)) = c;
      }
      d.set_block(z, m);
    }
    std::map<std::string, DgModule> at;
    at.emplace(indices_[0], DgModule(gm, d));
    return DgFam(field_, indices_, std::move(at));
  }

  ChainFam U_mor(const Mor& m) const {
    DgFam s = U_ob(m.src()), t = U_ob(m.tgt());
    const DgModule& sm = s.at(indices_[0]);
    const DgModule& tm = t.at(indices_[0]);
    HomMap h(sm.gm(), tm.gm(), 0);
    for (int z = 0; z <= cap_; ++z) {
      int rows = sm.rank(z), cols = tm.rank(z);
      if (rows == 0 || cols == 0) continue;
      Mat blk(field_, rows, cols);
      for (int i = 0; i < rows; ++i) {
        Poly p = m.apply(pword(m.src().words(z)[i], Scalar::one(field_)));
        for (const auto& [w, c] : p.terms) blk.at(i, m.tgt().word_index(z, w)) = c;
      }
      h.set_block(z, blk);
    }
    std::map<std::string, ChainMap> at;
    at.emplace(indices_[0], ChainMap(sm, tm, h));
    return ChainFam(s, t, std::move(at));
  }

  /// Free dg-algebra on the basis of a module: one generator per basis
  /// element (degree >= 0), differential read off the module's d.
  Obj F_ob(const DgFam& m) const {
    const DgModule& mod = m.at(indices_[0]);
    const GradedModule& gm = mod.gm();
    std::vector<std::string> labels;
    std::vector<int> degs;
    std::map<int, int> off;
    for (const auto& [z, b] : gm.degrees()) {
      if (z < 0) throw precondition_error("tensor instance: F needs degrees >= 0");
      off[z] = static_cast<int>(labels.size());
      for (const auto& l : b) {
        labels.push_back(l);
        degs.push_back(z);
      }
    }
    std::vector<Poly> dgen(labels.size());
    for (const auto& [z, b] : gm.degrees()) {
      if (gm.rank(z + 1) == 0) continue;
      Mat d = mod.d().block(z);
      for (int j = 0; j < static_cast<int>(b.size()); ++j)
        for (int k = 0; k < d.cols(); ++k)
          dgen[off.at(z) + j].add_term({off.at(z + 1) + k}, d.at(j, k));
    }
    return Obj(field_, std::move(labels), std::move(degs), std::move(dgen));
  }

  Mor F_mor(const ChainFam& f) const {
    Obj s = F_ob(f.src()), t = F_ob(f.tgt());
    const GradedModule& sg = f.src().at(indices_[0]).gm();
    const GradedModule& tg = f.tgt().at(indices_[0]).gm();
    std::map<int, int> soff = fob_offsets(sg), toff = fob_offsets(tg);
    std::vector<Poly> im(s.size());
    for (const auto& [z, b] : sg.degrees()) {
      if (tg.rank(z) == 0) continue;
      Mat blk = f.at(indices_[0]).block(z);
      for (int j = 0; j < static_cast<int>(b.size()); ++j)
        for (int k = 0; k < blk.cols(); ++k) im[soff.at(z) + j].add_term({toff.at(z) + k}, blk.at(j, k));
    }
    return Mor(std::move(s), std::move(t), std::move(im), cap_);
  }

  /// eta_M: M -> U F M, basis element to its length-one word.
  ChainFam unit(const DgFam& m) const {
    Obj fm = F_ob(m);
    DgFam ufm = U_ob(fm);
    const GradedModule& mg = m.at(indices_[0]).gm();
    std::map<int, int> off = fob_offsets(mg);
    HomMap h(mg, ufm.at(indices_[0]).gm(), 0);
    for (const auto& [z, b] : mg.degrees()) {
      if (z > cap_) throw window_error("unit: module degree exceeds the window");
      Mat blk(field_, static_cast<int>(b.size()), ufm.at(indices_[0]).rank(z));
      for (int j = 0; j < blk.rows(); ++j)
        blk.at(j, fm.word_index(z, {off.at(z) + j})) = Scalar::one(field_);
      h.set_block(z, blk);
    }
    std::map<std::string, ChainMap> at;
    at.emplace(indices_[0], ChainMap(m.at(indices_[0]), ufm.at(indices_[0]), h));
    return ChainFam(m, ufm, std::move(at));
  }

  /// eps_A: F U A -> A: the word-named generator goes to that word. The
  /// source is the canonical windowed presentation F_ob(U_ob(A)), so the
  /// chain condition is only checkable below the window edge.
  Mor counit(const Obj& a) const {
    Obj fua = F_ob(U_ob(a));
    std::vector<Poly> images;
    for (int z = 0; z <= cap_; ++z)
      for (const Word& w : a.words(z)) images.push_back(pword(w, Scalar::one(field_)));
    return Mor(std::move(fua), a, std::move(images), cap_);
  }

  Mor compose_mor(const Mor& f, const Mor& g) const { return compose(f, g, cap_); }
  Mor identity_mor(const Obj& a) const { return AlgMor::identity(a); }
  bool mor_equal(const Mor& f, const Mor& g) const { return f == g; }
  const Obj& mor_target(const Mor& f) const { return f.tgt(); }

  /// transpose of l: F M -> A as a chain map M -> U A, computed from the
  /// generator images directly (no enumeration of U F M needed).
  ChainFam transpose_mor(const DgFam& m, const Mor& l) const {
    DgFam ua = U_ob(l.tgt());
    const GradedModule& mg = m.at(indices_[0]).gm();
    std::map<int, int> off = fob_offsets(mg);
    HomMap h(mg, ua.at(indices_[0]).gm(), 0);
    for (const auto& [z, b] : mg.degrees()) {
      if (z < 0 || z > cap_) throw window_error("transpose: degree outside the window");
      int cols = ua.at(indices_[0]).rank(z);
      if (cols == 0) {
        for (int j = 0; j < static_cast<int>(b.size()); ++j)
          if (!l.images()[off.at(z) + j].is_zero())
            throw window_error("transpose: nonzero image in an empty degree");
        continue;
      }
      Mat blk(field_, static_cast<int>(b.size()), cols);
      for (int j = 0; j < blk.rows(); ++j)
        for (const auto& [w, c] : l.images()[off.at(z) + j].terms)
          blk.at(j, l.tgt().word_index(z, w)) = c;
      h.set_block(z, blk);
    }
    std::map<std::string, ChainMap> at;
    at.emplace(indices_[0], ChainMap(m.at(indices_[0]), ua.at(indices_[0]), h));
    return ChainFam(m, ua, std::move(at));
  }

  /// cotranspose of x: M -> U A: the algebra map F M -> A with generator
  /// images read off the rows of x.
  Mor cotranspose(const ChainFam& x, const Obj& b) const {
    Obj fm = F_ob(x.src());
    const GradedModule& mg = x.src().at(indices_[0]).gm();
    std::map<int, int> off = fob_offsets(mg);
    std::vector<Poly> im(fm.size());
    for (const auto& [z, lab] : mg.degrees()) {
      int cols = x.tgt().at(indices_[0]).rank(z);
      if (cols == 0) continue;
      Mat blk = x.at(indices_[0]).block(z);
      for (int j = 0; j < static_cast<int>(lab.size()); ++j)
        for (int k = 0; k < cols; ++k) im[off.at(z) + j].add_term(b.words(z)[k], blk.at(j, k));
    }
    return Mor(std::move(fm), b, std::move(im), cap_);
  }

  struct Coprod {
    Obj obj;
    Mor inj1, inj2;
  };

  /// Free product: concatenation of presentations (relabelling on collision).
  Coprod coproduct(const Obj& a, const Obj& b) const {
    std::set<std::string> used;
    std::vector<std::string> labels;
    std::vector<int> degs;
    std::vector<Poly> dgen;
    for (int i = 0; i < a.size(); ++i) {
      used.insert(a.label(i));
      labels.push_back(a.label(i));
      degs.push_back(a.deg(i));
      dgen.push_back(a.dgen(i));
    }
    int shift = a.size();
    for (int i = 0; i < b.size(); ++i) {
      std::string l = b.label(i);
      while (!used.insert(l).second) l += "'";
      labels.push_back(l);
      degs.push_back(b.deg(i));
      Poly p;
      for (const auto& [w, c] : b.dgen(i).terms) {
        Word nw;
        for (int g : w) nw.push_back(g + shift);
        p.add_term(nw, c);
      }
      dgen.push_back(std::move(p));
    }
    Obj obj(field_, std::move(labels), std::move(degs), std::move(dgen));
    std::vector<Poly> i1, i2;
    for (int i = 0; i < a.size(); ++i) i1.push_back(pword({i}, Scalar::one(field_)));
    for (int i = 0; i < b.size(); ++i) i2.push_back(pword({shift + i}, Scalar::one(field_)));
    Mor inj1(a, obj, std::move(i1));
    Mor inj2(b, obj, std::move(i2));
    return Coprod{std::move(obj), std::move(inj1), std::move(inj2)};
  }

  struct Pushed {
    Obj d;
    Mor jbar;  // A -> D
    Mor g;     // F C -> D
    std::vector<int> fcpos;  // for each adjoined generator, its F C index
  };

  /// Pushout of F C <- F(U A) -> A as a generator adjunction: keep A's
  /// presentation and add one generator per basis element of the M[1]-part
  /// of the cone, with differentials read off the cone's matrix.
  Pushed adjoin_pushout(const Obj& a, const ConeFam& c, const ChainFam& /*alpha*/) const {
    const DgModule& cm = c.cone.at(indices_[0]);
    const DgModule& m1 = c.m1.at(indices_[0]);
    std::set<std::string> used;
    std::vector<std::string> labels;
    std::vector<int> degs;
    std::vector<Poly> dgen;
    for (int i = 0; i < a.size(); ++i) {
      used.insert(a.label(i));
      labels.push_back(a.label(i));
      degs.push_back(a.deg(i));
      dgen.push_back(a.dgen(i));
    }
    // adjoined generators in (degree ascending, position) order
    std::map<std::pair<int, int>, int> vid;  // (degree, m1 position) -> D id
    std::vector<int> fcpos;
    std::map<int, int> fcoff;  // cone degree -> first F C generator id
    {
      int run = 0;
      for (const auto& [z, b] : cm.gm().degrees()) {
        fcoff[z] = run;
        run += static_cast<int>(b.size());
      }
    }
    for (const auto& [z, b] : m1.gm().degrees()) {
      if (z < 1) throw precondition_error("adjoin: attached module must live in degrees >= 2");
      if (z + 1 > cap_) throw window_error("adjoin: attached degree exceeds the window");
      for (int j = 0; j < static_cast<int>(b.size()); ++j) {
        std::string l = b[j];
        while (!used.insert(l).second) l += "'";
        vid[{z, j}] = static_cast<int>(labels.size());
        labels.push_back(l);
        degs.push_back(z);
        fcpos.push_back(fcoff.at(z) + j);
      }
    }
    for (const auto& [z, b] : m1.gm().degrees()) {
      for (int j = 0; j < static_cast<int>(b.size()); ++j) {
        Poly p;
        if (cm.rank(z + 1) > 0) {
          Mat d = cm.d().block(z);
          int r1 = m1.rank(z + 1);
          for (int k = 0; k < d.cols(); ++k) {
            if (d.at(j, k).is_zero()) continue;
            if (k < r1) p.add_term({vid.at({z + 1, k})}, d.at(j, k));
            else p.add_term(a.words(z + 1)[k - r1], d.at(j, k));
          }
        }
        dgen.push_back(std::move(p));
      }
    }
    Obj d(field_, std::move(labels), std::move(degs), std::move(dgen));
    std::vector<Poly> jim;
    for (int i = 0; i < a.size(); ++i) jim.push_back(pword({i}, Scalar::one(field_)));
    Mor jbar(a, d, std::move(jim));
    // g on F C: adjoined generators for the M[1]-part, A's words for the rest
    Obj fc = F_ob(c.cone);
    std::vector<Poly> gim(fc.size());
    for (const auto& [z, b] : cm.gm().degrees()) {
      int r1 = m1.rank(z);
      for (int j = 0; j < static_cast<int>(b.size()); ++j) {
        if (j < r1) gim[fcoff.at(z) + j] = pword({vid.at({z, j})}, Scalar::one(field_));
        else gim[fcoff.at(z) + j] = pword(a.words(z)[j - r1], Scalar::one(field_));
      }
    }
    Mor g(std::move(fc), d, std::move(gim), cap_);
    return Pushed{std::move(d), std::move(jbar), std::move(g), std::move(fcpos)};
  }

  /// Mediator for a cocone (u: F C -> B, f: A -> B).
  Mor adjoin_mediator(const Pushed& p, const Mor& u, const Mor& f) const {
    if (u.tgt() != f.tgt()) throw precondition_error("adjoin_mediator: cocone targets differ");
    std::vector<Poly> im;
    for (int i = 0; i < f.src().size(); ++i) im.push_back(f.images()[i]);
    for (int k : p.fcpos) im.push_back(u.images()[k]);
    return Mor(p.d, f.tgt(), std::move(im), cap_);
  }

  struct Colimit {
    Obj obj;
    std::vector<Mor> legs;
  };
  Colimit sequential_colimit(const std::vector<Mor>& chain) const {
    if (chain.empty()) throw precondition_error("sequential_colimit: empty chain");
    Colimit c{chain.back().tgt(), {}};
    c.legs.assign(chain.size() + 1, identity_mor(c.obj));
    for (size_t i = chain.size(); i-- > 0;) c.legs[i] = compose_mor(chain[i], c.legs[i + 1]);
    return c;
  }

 private:
  static std::map<int, int> fob_offsets(const GradedModule& gm) {
    std::map<int, int> off;
    int run = 0;
    for (const auto& [z, b] : gm.degrees()) {
      off[z] = run;
      run += static_cast<int>(b.size());
    }
    return off;
  }

  Field field_;
  int cap_;
  std::vector<std::string> indices_;
};

/// Random semifree algebra: generator degrees drawn from [deg_lo, deg_hi],
/// each differential a random cycle in the subalgebra of earlier generators
/// (so d^2 = 0 holds by construction).
inline SemifreeAlgebra random_semifree(SplitMix64& rng, const TensorInstance& inst, int max_gens,
                                       int deg_lo, int deg_hi) {
  const Field& f = inst.field();
  int n = 1 + static_cast<int>(rng.below(max_gens));
  std::vector<std::string> labels;
  std::vector<int> degs;
  std::vector<Poly> dgen;
  for (int i = 0; i < n; ++i) {
    int deg = static_cast<int>(rng.int_in(deg_lo, deg_hi));
    SemifreeAlgebra cur(f, labels, degs, dgen);
    Poly dp;
    // a kernel vector of the truncated complex is only a genuine cycle when
    // the next degree is still inside the window
    if (deg + 2 <= inst.cap()) {
      DgFam u = inst.U_ob(cur);
      const DgModule& um = u.at(inst.indices()[0]);
      if (um.rank(deg + 1) > 0) {
        Mat cycles = kernel_basis(um.d().block(deg + 1));
        for (int r = 0; r < cycles.rows(); ++r) {
          Scalar c = Scalar::from_int(f, static_cast<long long>(rng.int_in(-2, 2)));
          if (c.is_zero()) continue;
          for (int k = 0; k < cycles.cols(); ++k)
            dp.add_term(cur.words(deg + 1)[k], c * cycles.at(r, k));
        }
      }
    }
    labels.push_back("g" + std::to_string(i));
    degs.push_back(deg);
    dgen.push_back(std::move(dp));
  }
  return SemifreeAlgebra(f, std::move(labels), std::move(degs), std::move(dgen));
}

}  // namespace dgm

#endif
