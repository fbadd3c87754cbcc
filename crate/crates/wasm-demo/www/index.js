import init, { shifted_spectra, sync_series, coupling_window } from "./pkg/hypersync_wasm.js";

const $ = (id) => document.getElementById(id);
const COLORS = { lw: "#1f6fb4", clique: "#c0392b" };

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.lineWidth = 1;
}

function drawSpectrum(values) {
  const c = $("spectrum"), ctx = c.getContext("2d");
  const n = values[0];
  const lw = values.slice(1, 1 + n), cl = values.slice(1 + n, 1 + 2 * n);
  const all = [...lw, ...cl, -1, 1];
  const lo = Math.min(...all) - 0.2, hi = Math.max(...all) + 0.2;
  const x = (v) => 30 + ((v - lo) / (hi - lo)) * (c.width - 60);
  axes(ctx, c.width, c.height);
  ctx.fillStyle = "#eef6ee";
  ctx.fillRect(x(-1), 10, x(1) - x(-1), c.height - 40);
  ctx.beginPath();
  ctx.moveTo(30, c.height - 30);
  ctx.lineTo(c.width - 30, c.height - 30);
  ctx.stroke();
  ctx.fillStyle = "#333";
  for (const t of [-1, 0, 1, lo + 0.2, hi - 0.2]) {
    ctx.fillText(t.toFixed(2), x(t) - 12, c.height - 12);
  }
  const row = (vals, y, color) => {
    ctx.fillStyle = color;
    for (const v of vals) {
      ctx.beginPath();
      ctx.arc(x(v), y, 5, 0, 2 * Math.PI);
      ctx.fill();
    }
  };
  row(lw, 45, COLORS.lw);
  row(cl, 95, COLORS.clique);
}

function drawSeries(series) {
  const c = $("series"), ctx = c.getContext("2d");
  axes(ctx, c.width, c.height);
  const logs = {};
  let lo = Infinity, hi = -Infinity, len = 1;
  for (const [k, s] of Object.entries(series)) {
    logs[k] = Array.from(s, (v) => Math.log10(Math.max(v, 1e-300)));
    for (const v of logs[k]) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
    len = Math.max(len, s.length);
  }
  lo = Math.max(lo, -16);
  hi = Math.max(hi, lo + 1);
  const x = (i) => 50 + (i / Math.max(len - 1, 1)) * (c.width - 70);
  const y = (v) => 10 + (1 - (Math.max(v, lo) - lo) / (hi - lo)) * (c.height - 40);
  ctx.beginPath();
  ctx.moveTo(50, 10);
  ctx.lineTo(50, c.height - 30);
  ctx.lineTo(c.width - 20, c.height - 30);
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.fillText(`1e${Math.round(hi)}`, 5, y(hi) + 4);
  ctx.fillText(`1e${Math.round(lo)}`, 5, y(lo));
  ctx.fillText("step " + (len - 1), c.width - 70, c.height - 12);
  for (const [k, vals] of Object.entries(logs)) {
    ctx.strokeStyle = COLORS[k];
    ctx.lineWidth = 2;
    ctx.beginPath();
    vals.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
    ctx.stroke();
  }
}

function describeWindow(w, eps) {
  const [lower, upper, lmin, lmax, sLo, sHi] = w;
  const inside = eps >= lower && eps <= upper;
  let html = `Nonzero |λ| of L<sub>w</sub> lie in [${lmin.toFixed(4)}, ${lmax.toFixed(4)}].<br>`;
  html += `Eigenvalue window: ε ∈ [${lower.toFixed(4)}, ${upper.toFixed(4)}]`;
  html += lower > upper ? " (empty)" : "";
  html += `; current ε = ${eps.toFixed(2)} is <b>${inside ? "inside" : "outside"}</b>.<br>`;
  if (Number.isFinite(sLo)) {
    html += `Structural window (degrees and diameter only): [${sLo.toFixed(4)}, ${sHi.toFixed(4)}]`;
    html += sLo > sHi ? " (empty)." : ".";
  } else {
    html += "Structural window: needs a uniform hypergraph.";
  }
  $("window").innerHTML = html;
}

function update() {
  const text = $("edges").value;
  const eps = parseFloat($("eps").value);
  const sigma = parseFloat($("sigma").value) || 0;
  const seed = BigInt(Math.max(0, parseInt($("seed").value, 10) || 0));
  const steps = Math.min(20000, Math.max(1, parseInt($("steps").value, 10) || 1));
  $("eps-val").textContent = eps.toFixed(2);
  $("error").textContent = "";
  try {
    drawSpectrum(shifted_spectra(text, eps));
    drawSeries({
      lw: sync_series(text, eps, "lw", steps, seed),
      clique: sync_series(text, eps, "clique", steps, seed),
    });
    describeWindow(coupling_window(text, sigma), eps);
  } catch (e) {
    $("error").textContent = String(e);
  }
}

await init();
for (const id of ["edges", "eps", "sigma", "seed", "steps"]) {
  $(id).addEventListener("input", update);
}
update();
