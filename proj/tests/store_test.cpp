#include "quiver/store.hpp"

#include <gtest/gtest.h>

namespace quiver {
namespace {

TEST(StoreTypes, DefineAndLookup) {
  GraphStore store;
  store.define_node_type(Name{"Person"});
  EXPECT_NE(store.find_node_type(Name{"Person"}), nullptr);
  EXPECT_NE(store.find_node_type(Name{"person"}), nullptr);
  EXPECT_NE(store.find_node_type(Name{"PERSON"}), nullptr);
  EXPECT_EQ(store.find_node_type(Name{"Account"}), nullptr);
}

TEST(StoreTypes, DuplicateNameIsCaseInsensitive) {
  GraphStore store;
  store.define_node_type(Name{"Person"});
  try {
    store.define_node_type(Name{"person"});
    FAIL() << "expected DuplicateType";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::duplicate_type);
  }
}

TEST(StoreTypes, SelfSupertypeRejected) {
  GraphStore store;
  try {
    store.define_node_type(Name{"Account"}, Name{"Account"});
    FAIL() << "expected a supertype error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::supertype_cycle || e.code() == ErrorCode::unknown_supertype);
  }
}

TEST(StoreTypes, UnknownSupertype) {
  GraphStore store;
  try {
    store.define_node_type(Name{"Account"}, Name{"Asset"});
    FAIL() << "expected UnknownSupertype";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_supertype);
  }
}

TEST(StoreTypes, EdgeTypeRecordsEndpoints) {
  GraphStore store;
  store.define_node_type(Name{"Account"});
  store.define_node_type(Name{"Medium"});
  TypeId transfer = store.define_edge_type(Name{"transfer"}, Name{"Account"}, Name{"Account"});
  TypeId sign_in = store.define_edge_type(Name{"signIn"}, Name{"Medium"}, Name{"Account"});
  EXPECT_EQ(store.edge_type(transfer).first_seen_source, store.find_node_type(Name{"Account"})->id);
  EXPECT_EQ(store.edge_type(sign_in).first_seen_source, store.find_node_type(Name{"Medium"})->id);
  EXPECT_EQ(store.edge_type(sign_in).first_seen_dest, store.find_node_type(Name{"Account"})->id);
}

TEST(StoreTypes, EdgeSelfSupertypeRejected) {
  GraphStore store;
  store.define_node_type(Name{"Person"});
  store.define_node_type(Name{"Account"});
  try {
    store.define_edge_type(Name{"own"}, Name{"Person"}, Name{"Account"}, Name{"own"});
    FAIL() << "expected SupertypeCycle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::supertype_cycle);
  }
}

TEST(StoreTypes, LateSupertypeCycleRejected) {
  GraphStore store;
  store.define_node_type(Name{"A"});
  store.define_node_type(Name{"B"}, Name{"A"});
  try {
    store.set_node_supertype(Name{"A"}, Name{"B"});
    FAIL() << "expected SupertypeCycle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::supertype_cycle);
  }
}

TEST(StoreNodes, InsertAssignsMonotoneIds) {
  GraphStore store;
  store.define_node_type(Name{"Person"});
  ElementId first = store.insert_node(Name{"Person"}, {{"name", Value::text("Hatfield")}});
  EXPECT_EQ(first, 1u);
  ElementId second = store.insert_node(Name{"person"}, {{"name", Value::text("Skundric")}});
  EXPECT_GT(second, first);
  EXPECT_EQ(store.node(second).type, store.node(first).type);
}

TEST(StoreNodes, UnknownTypeThrows) {
  GraphStore store;
  try {
    store.insert_node(Name{"Ghost"}, {});
    FAIL() << "expected UnknownType";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_type);
  }
}

TEST(StoreNodes, KnownPropertiesGrowOnWrite) {
  GraphStore store;
  TypeId person = store.define_node_type(Name{"Person"});
  store.insert_node(person, {{"name", Value::text("x")}});
  store.insert_node(person, {{"age", Value::integer(3)}});
  const auto& known = store.node_type(person).known_properties;
  ASSERT_EQ(known.size(), 2u);
  EXPECT_EQ(known.at("name"), ValueKind::text);
  EXPECT_EQ(known.at("age"), ValueKind::integer);
}

TEST(StoreEdges, SelfLoopAllowedAndDanglingRejected) {
  GraphStore store;
  store.define_node_type(Name{"Account"});
  store.define_edge_type(Name{"transfer"}, Name{"Account"}, Name{"Account"});
  ElementId a = store.insert_node(Name{"Account"}, {});
  ElementId loop = store.insert_edge(Name{"transfer"}, a, a, {{"amount", Value::integer(1)}});
  EXPECT_GT(loop, a);
  try {
    store.insert_edge(Name{"transfer"}, a, 999999, {});
    FAIL() << "expected UnknownNode";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_node);
  }
}

TEST(StoreEdges, SharedIdSpace) {
  GraphStore store;
  store.define_node_type(Name{"Account"});
  store.define_edge_type(Name{"transfer"}, Name{"Account"}, Name{"Account"});
  ElementId a = store.insert_node(Name{"Account"}, {});
  ElementId b = store.insert_node(Name{"Account"}, {});
  ElementId e = store.insert_edge(Name{"transfer"}, a, b, {});
  EXPECT_EQ(e, 3u);
}

struct SubtypeFixture {
  GraphStore store;
  ElementId a = 0, b = 0, c = 0;
  ElementId plain = 0, wire = 0;

  SubtypeFixture() {
    store.define_node_type(Name{"Account"});
    store.define_edge_type(Name{"transfer"}, Name{"Account"}, Name{"Account"});
    store.define_edge_type(Name{"wireTransfer"}, Name{"Account"}, Name{"Account"}, Name{"transfer"});
    a = store.insert_node(Name{"Account"}, {});
    b = store.insert_node(Name{"Account"}, {});
    c = store.insert_node(Name{"Account"}, {});
    plain = store.insert_edge(Name{"transfer"}, a, b, {});
    wire = store.insert_edge(Name{"wireTransfer"}, a, c, {});
  }
};

TEST(StoreAdjacency, LabelIncludesSubtypes) {
  SubtypeFixture f;
  auto both = f.store.edges_from(f.a, Direction::outgoing, Name{"transfer"});
  EXPECT_EQ(both, (std::vector<ElementId>{f.plain, f.wire}));
  auto wires = f.store.edges_from(f.a, Direction::outgoing, Name{"wireTransfer"});
  EXPECT_EQ(wires, (std::vector<ElementId>{f.wire}));
  auto all = f.store.edges_from(f.a, Direction::outgoing);
  EXPECT_EQ(all, both);
  auto none = f.store.edges_from(f.b, Direction::outgoing, Name{"transfer"});
  EXPECT_TRUE(none.empty());
  auto incoming = f.store.edges_from(f.c, Direction::incoming, Name{"transfer"});
  EXPECT_EQ(incoming, (std::vector<ElementId>{f.wire}));
}

TEST(StoreAdjacency, AscendingEdgeIdOrder) {
  GraphStore store;
  store.define_node_type(Name{"Account"});
  store.define_edge_type(Name{"transfer"}, Name{"Account"}, Name{"Account"});
  ElementId hub = store.insert_node(Name{"Account"}, {});
  std::vector<ElementId> inserted;
  for (int i = 0; i < 5; ++i) {
    ElementId other = store.insert_node(Name{"Account"}, {});
    inserted.push_back(store.insert_edge(Name{"transfer"}, hub, other, {}));
  }
  auto listed = store.edges_from(hub, Direction::outgoing, Name{"transfer"});
  EXPECT_EQ(listed, inserted);  // insertion order is id order
  // pure function of store state
  EXPECT_EQ(store.edges_from(hub, Direction::outgoing, Name{"transfer"}), listed);
}

TEST(StoreAdjacency, EveryEdgeIndexedOnBothEndpoints) {
  SubtypeFixture f;
  for (const auto& [id, edge] : f.store.edges()) {
    const std::string& type_name = f.store.edge_type(edge.type).name;
    auto out = f.store.edges_from(edge.source, Direction::outgoing, Name{type_name, true});
    EXPECT_EQ(std::count(out.begin(), out.end(), id), 1);
    auto in = f.store.edges_from(edge.dest, Direction::incoming, Name{type_name, true});
    EXPECT_EQ(std::count(in.begin(), in.end(), id), 1);
  }
}

TEST(StoreConforms, ChainWalk) {
  SubtypeFixture f;
  const EdgeType* wire = f.store.find_edge_type(Name{"wireTransfer"});
  ASSERT_NE(wire, nullptr);
  EXPECT_TRUE(f.store.edge_type_conforms(wire->id, Name{"transfer"}));
  EXPECT_TRUE(f.store.edge_type_conforms(wire->id, Name{"WIRETRANSFER"}));
  const EdgeType* plain = f.store.find_edge_type(Name{"transfer"});
  EXPECT_FALSE(f.store.edge_type_conforms(plain->id, Name{"wireTransfer"}));
  EXPECT_FALSE(f.store.edge_type_conforms(plain->id, Name{"nothing"}));
}

TEST(StoreConforms, NodeLabelsCaseInsensitive) {
  GraphStore store;
  TypeId person = store.define_node_type(Name{"Person"});
  TypeId account = store.define_node_type(Name{"Account"});
  EXPECT_TRUE(store.node_type_conforms(person, Name{"person"}));
  EXPECT_FALSE(store.node_type_conforms(account, Name{"person"}));
  // quoted labels compare exactly
  EXPECT_FALSE(store.node_type_conforms(person, Name{"person", true}));
  EXPECT_TRUE(store.node_type_conforms(person, Name{"Person", true}));
}

TEST(StoreConforms, ReflexiveAndTransitive) {
  GraphStore store;
  store.define_node_type(Name{"A"});
  store.define_node_type(Name{"B"}, Name{"A"});
  store.define_node_type(Name{"C"}, Name{"B"});
  TypeId c = store.find_node_type(Name{"C"})->id;
  EXPECT_TRUE(store.node_type_conforms(c, Name{"C"}));
  EXPECT_TRUE(store.node_type_conforms(c, Name{"B"}));
  EXPECT_TRUE(store.node_type_conforms(c, Name{"A"}));
  TypeId a = store.find_node_type(Name{"A"})->id;
  EXPECT_FALSE(store.node_type_conforms(a, Name{"C"}));
}

}  // namespace
}  // namespace quiver
