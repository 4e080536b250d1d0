#!/usr/bin/env node
// SMT-LIB v2 front end for the WASM build of Z3.
// Usage: z3smt2.js FILE | z3smt2.js -in   (reads stdin with -in, like z3)
'use strict';
const fs = require('fs');

async function main() {
  const arg = process.argv[2];
  const script =
    !arg || arg === '-in' ? fs.readFileSync(0, 'utf8') : fs.readFileSync(arg, 'utf8');
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const out = await Z3.eval_smtlib2_string(ctx, script);
  process.stdout.write(out.endsWith('\n') || out.length === 0 ? out : out + '\n');
  // Skip context teardown; the process exits anyway.
  process.exit(0);
}

main().catch((err) => {
  process.stderr.write(String(err && err.stack ? err.stack : err) + '\n');
  process.exit(1);
});
