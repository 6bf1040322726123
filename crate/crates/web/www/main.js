import init, { relaxation_curve, soe_coefficients, PathDemo } from "./pkg/subdiff_web.js";

const $ = (id) => document.getElementById(id);
const status = $("status");

function fail(e) {
  status.textContent = String(e.message ?? e);
  status.className = "err";
}

function bind(id, fmt) {
  const el = $(id);
  const out = $(id + "-v");
  const show = () => { if (out) out.textContent = fmt(Number(el.value)); };
  show();
  el.addEventListener("input", show);
  return el;
}

// --- relaxation curve and weights -----------------------------------------

const alpha = bind("alpha", (v) => v.toFixed(2));
const jInput = bind("j", (v) => String(v));
const lambda = bind("lambda", (v) => (10 ** v).toPrecision(3));

function axes(ctx, x0, y0, w, h, xlab, ylab) {
  ctx.strokeStyle = "#888";
  ctx.strokeRect(x0, y0, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "12px system-ui";
  ctx.fillText(xlab, x0 + w / 2 - 20, y0 + h + 16);
  ctx.save();
  ctx.translate(x0 - 34, y0 + h / 2 + 20);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylab, 0, 0);
  ctx.restore();
}

function polyline(ctx, xs, ys, color, width = 2) {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(x, ys[i]) : ctx.moveTo(x, ys[i])));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawCurve() {
  const a = Number(alpha.value), j = Number(jInput.value);
  const lam = 10 ** Number(lambda.value), eps = Number($("eps").value);
  const c = relaxation_curve(a, lam, eps, j, 1e-3, 1e3, 200);
  const ctx = $("curve").getContext("2d");
  ctx.clearRect(0, 0, 940, 300);
  const [pw, ph, top] = [400, 240, 20];
  const lt = [], ex = [], soe = [], err = [];
  for (let i = 0; i < c.length; i += 3) {
    lt.push(Math.log10(c[i]));
    ex.push(c[i + 1]);
    soe.push(c[i + 2]);
    err.push(Math.log10(Math.max(Math.abs(c[i + 1] - c[i + 2]), 1e-17)));
  }
  const sx = (x0) => lt.map((v) => x0 + ((v + 3) / 6) * pw);
  axes(ctx, 50, top, pw, ph, "log10 t", "value");
  polyline(ctx, sx(50), ex.map((v) => top + ph * (1 - v)), "#000", 3);
  polyline(ctx, sx(50), soe.map((v) => top + ph * (1 - v)), "#e67e22", 1.5);
  const lo = -17, hi = 0;
  axes(ctx, 520, top, pw, ph, "log10 t", "log10 |error|");
  polyline(ctx, sx(520), err.map((v) => top + ph * (1 - (v - lo) / (hi - lo))), "#c0392b");
  ctx.fillStyle = "#555";
  ctx.fillText(`max |error| = ${Math.max(...err.map((v) => 10 ** v)).toExponential(2)}`, 530, top + 14);
}

function drawCoefficients() {
  const a = Number(alpha.value), j = Number(jInput.value), eps = Number($("eps").value);
  const c = soe_coefficients(a, eps, j);
  const ctx = $("coeff").getContext("2d");
  ctx.clearRect(0, 0, 940, 220);
  const [x0, top, w, h] = [50, 10, 860, 180];
  axes(ctx, x0, top, w, h, "log10 b_j", "a_j");
  let amax = 0, lbmin = Infinity, lbmax = -Infinity;
  for (let i = 0; i < c.length; i += 2) {
    amax = Math.max(amax, c[i]);
    const lb = Math.log10(c[i + 1]);
    lbmin = Math.min(lbmin, lb);
    lbmax = Math.max(lbmax, lb);
  }
  const span = Math.max(lbmax - lbmin, 1e-9);
  ctx.fillStyle = "#2c7fb8";
  for (let i = 0; i < c.length; i += 2) {
    const x = x0 + 4 + ((Math.log10(c[i + 1]) - lbmin) / span) * (w - 8);
    const bh = (c[i] / amax) * (h - 4);
    ctx.fillRect(x - 1.5, top + h - bh, 3, bh);
  }
  ctx.fillStyle = "#555";
  ctx.fillText(`${lbmin.toFixed(1)}`, x0, top + h + 16);
  ctx.fillText(`${lbmax.toFixed(1)}`, x0 + w - 24, top + h + 16);
  ctx.fillText(`max a_j = ${amax.toFixed(3)}`, x0 + 8, top + 14);
}

function redrawSoe() {
  try {
    drawCurve();
    drawCoefficients();
  } catch (e) {
    fail(e);
  }
}

// --- paths ----------------------------------------------------------------

const pAlpha = bind("p-alpha", (v) => v.toFixed(2));
const logt = bind("logt", (v) => v.toFixed(2));
let demo = null, pts = [], edges = [], src = null, dst = null;
const G = { w: 940, h: 480, pad: 20 };

function toScreen(i) {
  const [x, y] = [pts[2 * i], pts[2 * i + 1]];
  return [G.pad + (x / 2) * (G.w - 2 * G.pad), G.h - G.pad - y * (G.h - 2 * G.pad)];
}

function regenerate() {
  try {
    demo?.free();
    demo = new PathDemo(Number($("n").value), Number($("seed").value));
    pts = demo.coords();
    edges = demo.edges();
    src = 0;
    dst = farthest(0);
    drawGraph();
  } catch (e) {
    fail(e);
  }
}

function farthest(s) {
  let best = s, bd = -1;
  for (let v = 0; v < demo.vertex_count(); v++) {
    const d = demo.hops(s, v);
    if (d > bd) [best, bd] = [v, d];
  }
  return best;
}

function drawGraph() {
  const ctx = $("graph").getContext("2d");
  ctx.clearRect(0, 0, G.w, G.h);
  ctx.strokeStyle = "#bbb";
  for (let k = 0; k < edges.length; k += 2) {
    const [a, b] = [toScreen(edges[k]), toScreen(edges[k + 1])];
    ctx.beginPath();
    ctx.moveTo(...a);
    ctx.lineTo(...b);
    ctx.stroke();
  }
  ctx.fillStyle = "#666";
  for (let i = 0; i < pts.length / 2; i++) {
    const [x, y] = toScreen(i);
    ctx.beginPath();
    ctx.arc(x, y, 2.5, 0, 2 * Math.PI);
    ctx.fill();
  }
  if (src === null || dst === null || src === dst) return;
  const t = 10 ** Number(logt.value);
  let path;
  try {
    path = demo.shortest_path(Number(pAlpha.value), t, Number($("kernel").value), 1e-12, src, dst);
  } catch (e) {
    $("path-info").textContent = String(e.message ?? e);
    return;
  }
  polyline(ctx, Array.from(path, (v) => toScreen(v)[0]), Array.from(path, (v) => toScreen(v)[1]), "#c0392b", 3);
  for (const [v, col] of [[src, "#27ae60"], [dst, "#2c3e50"]]) {
    const [x, y] = toScreen(v);
    ctx.fillStyle = col;
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
  const hops = path.length - 1, geo = demo.hops(src, dst);
  $("path-info").textContent =
    `source ${src}, target ${dst}: ${hops} hops, topological distance ${geo}` +
    (hops === geo ? " (a geodesic)" : ` (${hops - geo} extra)`);
}

$("graph").addEventListener("click", (ev) => {
  if (!demo) return;
  const r = ev.target.getBoundingClientRect();
  const [mx, my] = [ev.clientX - r.left, ev.clientY - r.top];
  let best = 0, bd = Infinity;
  for (let i = 0; i < pts.length / 2; i++) {
    const [x, y] = toScreen(i);
    const d = (x - mx) ** 2 + (y - my) ** 2;
    if (d < bd) [best, bd] = [i, d];
  }
  if (src === null || dst !== null) {
    src = best;
    dst = null;
  } else {
    dst = best;
  }
  drawGraph();
});

init()
  .then(() => {
    status.textContent = "";
    for (const id of ["alpha", "j", "lambda", "eps"]) $(id).addEventListener("input", redrawSoe);
    for (const id of ["p-alpha", "logt", "kernel"]) $(id).addEventListener("input", drawGraph);
    $("regen").addEventListener("click", regenerate);
    redrawSoe();
    regenerate();
  })
  .catch(fail);
