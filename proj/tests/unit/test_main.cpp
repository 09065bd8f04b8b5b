#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "seed.hpp"

int main(int argc, char** argv) {
  mmnet::test::announce_seed();
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
