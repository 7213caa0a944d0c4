// Built with: wasm-pack build crates/wasm --target web --out-dir www/pkg
import init, { render_parameter_plane, render_dynamical_plane, describe_parameter } from "./pkg/chdyn_wasm.js";

const PARAM = { xMin: -1.4, xMax: 4.6, yMin: -2.0, yMax: 2.0 };
const DYNAM = { xMin: -2.0, xMax: 2.0, yMin: -2.0, yMax: 2.0 };

const $ = (id) => document.getElementById(id);
const status = (msg) => { $("status").textContent = msg; };

function settings() {
  return {
    n: parseInt($("n").value, 10),
    iters: parseInt($("iters").value, 10),
    size: parseInt($("size").value, 10),
    alpha: $("alpha").value.trim(),
  };
}

function paint(canvas, width, height, rgba) {
  canvas.width = width;
  canvas.height = height;
  const img = new ImageData(new Uint8ClampedArray(rgba.buffer, rgba.byteOffset, rgba.length), width, height);
  canvas.getContext("2d").putImageData(img, 0, 0);
}

// Lets the status line repaint before a long synchronous call.
const later = (f) => new Promise((resolve) => setTimeout(() => resolve(f()), 20));

async function run(label, f) {
  status(label + " ...");
  const t = performance.now();
  try {
    await later(f);
    status(`${label} done in ${((performance.now() - t) / 1000).toFixed(2)} s`);
  } catch (e) {
    status(`${label} failed: ${e.message ?? e}`);
  }
}

function drawParam() {
  const s = settings();
  const w = s.size;
  const h = Math.round((w * (PARAM.yMax - PARAM.yMin)) / (PARAM.xMax - PARAM.xMin));
  return run("parameter plane", () => {
    paint($("param"), w, h, render_parameter_plane(s.n, PARAM.xMin, PARAM.xMax, PARAM.yMin, PARAM.yMax, w, h, s.iters));
  });
}

function drawDynam() {
  const s = settings();
  const w = s.size;
  return run("dynamical plane", () => {
    const px = render_dynamical_plane(s.n, s.alpha, DYNAM.xMin, DYNAM.xMax, DYNAM.yMin, DYNAM.yMax, w, w, s.iters,
      $("markers").checked);
    paint($("dynam"), w, w, px);
  });
}

function describe() {
  const s = settings();
  return run("summary", () => { $("summary").textContent = describe_parameter(s.n, s.alpha); });
}

function pick(ev) {
  const c = $("param");
  const r = c.getBoundingClientRect();
  const fx = (ev.clientX - r.left) / r.width;
  const fy = (ev.clientY - r.top) / r.height;
  const re = PARAM.xMin + fx * (PARAM.xMax - PARAM.xMin);
  const im = PARAM.yMax - fy * (PARAM.yMax - PARAM.yMin);
  $("alpha").value = `${re.toFixed(4)}${im < 0 ? "-" : "+"}${Math.abs(im).toFixed(4)}i`;
  drawDynam().then(describe);
}

await init();
$("draw-param").addEventListener("click", drawParam);
$("draw-dynam").addEventListener("click", drawDynam);
$("describe").addEventListener("click", describe);
$("param").addEventListener("click", pick);
await drawParam();
await drawDynam();
await describe();
