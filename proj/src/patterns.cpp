#include "mmnet/patterns.hpp"

#include <map>

#include "mmnet/error.hpp"
#include "mmnet/lexer.hpp"
#include "mmnet/net_text.hpp"

namespace mmnet {

namespace {

const char* kSplitter = R"(net splitter

actions {
  action getImage(a: oid, seg: rect, a2: oid, id: str, n: str, orig: str) {
    del-mm { (orig::L, mmdb:faceSegment, seg::L) }
    add-mm {
      (id::L, mmdb:address, a2::L)
      (id::L, mmdb:format, ".jpg"^^L)
      (id::L, mmdb:name, n::L)
    }
    add-mo { a2 -> extractIMG(src(a), seg) }
  }
  action cutFromIMG(a: oid, a2: oid) {
    add-mo { a -> sub(src(a), src(a2)) }
  }
}

places {
  place ch_in : str * oid
  place counter : str * oid * int
  place ready : oid * str * oid
  place repeat : str * oid
  place out : Set<str * oid>
  place p : Set<str * oid>
  place ch_out : str * oid
  view "#Segments" : L * L
    query """SELECT ?id ?c WHERE { ?id mmdb:faceCount ?c }"""
  view Segments : L * L
    query """SELECT ?id ?seg WHERE { ?id mmdb:faceSegment ?seg }"""
}

transitions {
  transition Start {
    guard id = id'::str
    in ch_in [id, a]
    read "#Segments" [id', c]
    out counter [id, a, c::int]
    out repeat [id, a]
  }
  transition Split {
    guard c > 0 and id = id'::str
    fresh nu_a : oid, nu_id : str
    input n : str
    in counter [id, a, c]
    in out [s]
    in repeat [id, a]
    read Segments [id', seg]
    action getImage(a, seg, nu_a, nu_id, n, id)
    out counter [id, a, minus(c, 1)]
    out ready [nu_a, id, a]
    out out [ins(s, nu_id, nu_a)]
  }
  transition "Update Image" {
    in ready [a2, id, a]
    action cutFromIMG(a, a2)
    out repeat [id, a]
  }
  transition Finish1 {
    guard c = 0 and empty(s)
    in counter [id, a, c]
    in out [s]
    in repeat [id, a]
    out ch_out [id, a]
  }
  transition Finish2 {
    guard c = 0 and not empty(s)
    in counter [id, a, c]
    in out [s]
    in repeat [id, a]
    out p [s]
  }
  transition Emit {
    guard not empty(s)
    in p [s]
    out p [rem(s, getL(s))]
    out ch_out [getL(s)]
  }
}

init {
  token out [{}]
}
)";

const char* kEnricher = R"(net enricher

actions {
  action updImage(a: oid, seg: rect) {
    add-mo { a -> markIMG(src(a), seg, $SHAPE, $COLOR) }
  }
}

places {
  place ch_in : str * str * oid
  place p1 : str * oid
  place p2 : str * str
  place p3 : rect * str
  place ch_out : str * oid
  view SegmentsByKey : L * I * L
    query """SELECT ?id ?k ?s WHERE {
      { ?id ?k ?s . FILTER(?k = mmdb:faceSegment) }
      UNION
      { ?id ?k ?s . FILTER(?k = mmdb:prodSegment) }
    }"""
}

transitions {
  transition T {
    in ch_in [k, id, a]
    out p1 [id, a]
    out p2 [k, id]
  }
  transition "Get Segment" {
    guard k'::str = k and id'::str = id
    in p2 [k, id]
    read SegmentsByKey [id', k', s]
    out p3 [s::rect, id]
  }
  transition Enrich {
    in p1 [id, a]
    in p3 [seg, id]
    action updImage(a, seg)
    out ch_out [id, a]
  }
}
)";

const char* kDetector = R"(net detector

actions {
  action addImgCnt(id: str, a: oid) {
    add-mm {
      (id::L, mmdb:faceCount, countIMGs(src(a), "human face"^^L))
      (id::L, mmdb:prodCount, countIMGs(src(a), "product"^^L))
    }
  }
  action updMetadata(id: str, l: I, seg: rect) {
    add-mm { (id::L, l, seg::L) }
  }
}

places {
  place ch_in : str * oid
  place detected : str * oid
  place faces : str * oid * Set<rect>
  place products : str * oid * Set<rect>
  place ch_out : str * oid
}

transitions {
  transition Detect {
    in ch_in [id, a]
    action addImgCnt(id, a)
    out detected [id, a]
  }
  transition "Get Face Segments" {
    in detected [id, a]
    out faces [id, a, detectIMG(src(a), "human face")]
  }
  transition "Update Face Metadata" {
    guard not empty(s)
    in faces [id, a, s]
    action updMetadata(id, mmdb:faceSegment, getL(s))
    out faces [id, a, rem(s, getL(s))]
  }
  transition "Get Product Segments" {
    guard empty(s)
    in faces [id, a, s]
    out products [id, a, detectIMG(src(a), "product")]
  }
  transition "Update Product Metadata" {
    guard not empty(s)
    in products [id, a, s]
    action updMetadata(id, mmdb:prodSegment, getL(s))
    out products [id, a, rem(s, getL(s))]
  }
  transition Finish {
    guard empty(s)
    in products [id, a, s]
    out ch_out [id, a]
  }
}
)";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size()))
    text.replace(pos, from.size(), to);
  return text;
}

std::string qualify(const std::string& net, const std::string& name) {
  return name.find('.') != std::string::npos ? name : net + "." + name;
}

void rename_places(MMNet& net, const std::map<std::string, std::string>& names) {
  auto mapped = [&](const std::string& n) {
    auto it = names.find(n);
    return it == names.end() ? n : it->second;
  };
  for (auto& p : net.places) p.name = mapped(p.name);
  for (auto& t : net.transitions)
    for (auto* arcs : {&t.inputs, &t.reads, &t.outputs})
      for (auto& a : *arcs) a.place = mapped(a.place);
  for (auto& tok : net.init.tokens) tok.place = mapped(tok.place);
}

Triple literal_triple(const std::string& s, const std::string& p, const std::string& o) {
  return {Term::literal(s), Term::iri(std::string(kMmdbNamespace) + p), Term::literal(o)};
}

Tuple image_token() { return {Value::str("i1"), Value::oid("img1")}; }

}  // namespace

MMNet splitter_net() { return parse_net(kSplitter); }

MMNet filter_net(const FilterOptions& opts) {
  if (opts.tags.empty()) throw TypeMismatch("filter needs at least one tag");
  std::string accept;
  for (const auto& tag : opts.tags) {
    if (!accept.empty()) accept += " or ";
    accept += "tag::str = " + quote(tag);
  }
  std::string text = R"(net filter

places {
  place ch_in : str * oid
  place ch_out : str * oid
  view "Images with Tags" : L * L
    query """SELECT ?id ?tag WHERE { ?id mmdb:containsObj ?tag }"""
}

transitions {
  transition Accept {
    guard ($ACCEPT) and id'::str = id
    in ch_in [id, a]
    read "Images with Tags" [id', tag]
    out ch_out [id, a]
  }
  transition Discard {
    guard not ($ACCEPT) and id'::str = id
    in ch_in [id, a]
    read "Images with Tags" [id', tag]
  }
}
)";
  return parse_net(replace_all(text, "$ACCEPT", accept));
}

MMNet enricher_net(const EnricherOptions& opts) {
  std::string text = replace_all(kEnricher, "$SHAPE", quote(opts.shape));
  return parse_net(replace_all(text, "$COLOR", quote(opts.color)));
}

MMNet detector_net() { return parse_net(kDetector); }

MMNet compose(const MMNet& up, const MMNet& down) {
  const Place& out = up.place("ch_out");
  const Place& in = down.place("ch_in");
  if (out.color != in.color)
    throw ChannelTypeMismatch(up.name + ".ch_out is " + type_tuple_name(out.color) + " but " +
                              down.name + ".ch_in is " + type_tuple_name(in.color));

  std::string fused = qualify(up.name, "ch_out");
  MMNet a = up;
  MMNet b = down;

  std::map<std::string, std::string> up_names;
  for (const auto& p : a.places)
    up_names[p.name] = p.name == "ch_in" ? "ch_in" : p.name == "ch_out" ? fused
                                                                         : qualify(a.name, p.name);
  rename_places(a, up_names);
  std::map<std::string, std::string> down_names;
  for (const auto& p : b.places)
    down_names[p.name] = p.name == "ch_in" ? fused : p.name == "ch_out" ? "ch_out"
                                                                         : qualify(b.name, p.name);
  rename_places(b, down_names);
  for (auto& t : a.transitions) t.name = qualify(a.name, t.name);
  for (auto& t : b.transitions) t.name = qualify(b.name, t.name);

  MMNet net;
  net.name = up.name + "_" + down.name;
  net.media_types = a.media_types;
  net.media_types.insert(b.media_types.begin(), b.media_types.end());
  for (const auto& [p, ns] : b.prefixes.entries()) net.prefixes.declare(p, ns);
  for (const auto& [p, ns] : a.prefixes.entries()) net.prefixes.declare(p, ns);

  net.actions = a.actions;
  std::map<std::string, std::string> action_names;
  for (auto def : b.actions) {
    const ActionDef* same = a.find_action(def.name);
    if (same && *same == def) continue;
    if (same) {
      action_names[def.name] = qualify(b.name, def.name);
      def.name = action_names[def.name];
    }
    net.actions.push_back(std::move(def));
  }
  for (auto& t : b.transitions)
    if (t.action && action_names.count(t.action->action))
      t.action->action = action_names[t.action->action];

  net.places = a.places;
  for (const auto& p : b.places)
    if (p.name != fused) net.places.push_back(p);
  net.transitions = a.transitions;
  net.transitions.insert(net.transitions.end(), b.transitions.begin(), b.transitions.end());

  net.init.tokens = a.init.tokens;
  net.init.tokens.insert(net.init.tokens.end(), b.init.tokens.begin(), b.init.tokens.end());
  net.init.storage = a.init.storage;
  net.init.storage.metadata =
      insert(std::move(net.init.storage.metadata), b.init.storage.metadata.triples());
  for (const auto& [addr, img] : b.init.storage.objects.objects())
    net.init.storage.objects.put_or_update(addr, img);
  return net;
}

MMNet with_key_adapter(const MMNet& enricher, const std::string& key) {
  MMNet net = enricher;
  net.name = enricher.name + "_keyed";
  rename_places(net, {{"ch_in", "keyed_in"}});
  net.places.insert(net.places.begin(), make_place("ch_in", {DataType::str(), DataType::oid()}));
  Transition t;
  t.name = "Add Key";
  t.inputs.push_back({"ch_in", {Expr::var("id"), Expr::var("a")}});
  t.outputs.push_back(
      {"keyed_in", {Expr::constant(Value::str(key)), Expr::var("id"), Expr::var("a")}});
  net.transitions.insert(net.transitions.begin(), std::move(t));
  return net;
}

MMNet pipeline_net() { return compose(detector_net(), compose(filter_net(), splitter_net())); }

std::vector<Rect> demo_face_boxes(int faces) {
  std::vector<Rect> out;
  for (int i = 0; i < faces; ++i) out.push_back({10 + 30 * i, 10, 30 + 30 * i, 30});
  return out;
}

std::vector<Rect> demo_product_boxes(int products) {
  std::vector<Rect> out;
  for (int i = 0; i < products; ++i) out.push_back({10 + 30 * i, 60, 30 + 30 * i, 80});
  return out;
}

SyntheticImage demo_image(int faces, int products) {
  SyntheticImage img;
  img.width = 100;
  img.height = 100;
  for (const auto& r : demo_face_boxes(faces)) img.regions.push_back({"human face", r});
  for (const auto& r : demo_product_boxes(products)) img.regions.push_back({"product", r});
  return img;
}

StorageInstance splitter_seed(int k) {
  StorageInstance s;
  s.objects.put_or_update("img1", demo_image(k, 0));
  s.metadata.add(literal_triple("i1", "faceCount", std::to_string(k)));
  for (const auto& r : demo_face_boxes(k))
    s.metadata.add(literal_triple("i1", "faceSegment", r.to_string()));
  return s;
}

StorageInstance filter_seed(const std::vector<std::string>& tags) {
  StorageInstance s;
  s.objects.put_or_update("img1", demo_image(1, 0));
  for (const auto& t : tags) s.metadata.add(literal_triple("i1", "containsObj", t));
  return s;
}

StorageInstance enricher_seed(int faces) { return splitter_seed(faces); }

StorageInstance detector_seed(int faces, int products) {
  StorageInstance s;
  s.objects.put_or_update("img1", demo_image(faces, products));
  return s;
}

std::vector<std::string> pattern_names() {
  return {"splitter", "filter", "enricher", "detector", "pipeline"};
}

MMNet demo_net(const std::string& name) {
  MMNet net;
  if (name == "splitter") {
    net = splitter_net();
    net.init.storage = splitter_seed(2);
    net.init.tokens.push_back({"ch_in", image_token()});
  } else if (name == "filter") {
    net = filter_net();
    net.init.storage = filter_seed({"human"});
    net.init.tokens.push_back({"ch_in", image_token()});
  } else if (name == "enricher") {
    net = enricher_net();
    net.init.storage = enricher_seed(1);
    net.init.tokens.push_back(
        {"ch_in", {Value::str(std::string(kMmdbNamespace) + "faceSegment"), Value::str("i1"),
                   Value::oid("img1")}});
  } else if (name == "detector") {
    net = detector_net();
    net.init.storage = detector_seed(2, 1);
    net.init.tokens.push_back({"ch_in", image_token()});
  } else if (name == "pipeline") {
    net = pipeline_net();
    net.init.storage = detector_seed(2, 1);
    net.init.storage.metadata.add(literal_triple("i1", "containsObj", "human"));
    net.init.tokens.push_back({"ch_in", image_token()});
  } else {
    throw Error("unknown pattern " + name);
  }
  return net;
}

}  // namespace mmnet
