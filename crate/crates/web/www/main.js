import init, { timeFrequency, ambiguitySurface, radarEstimate } from "./pkg/chirpjrc_web.js";

const $ = (id) => document.getElementById(id);
const preset = () => $("preset").value;

function show(id, fn) {
  try {
    fn();
    $("status").textContent = "";
    $("status").className = "";
  } catch (e) {
    $("status").textContent = String(e.message ?? e);
    $("status").className = "err";
  }
}

// Line plot of y against x with a zero line and min/max labels.
function plot(canvas, xs, ys, xlabel, ylabel) {
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, m = 36;
  g.clearRect(0, 0, w, h);
  const xmin = Math.min(...xs), xmax = Math.max(...xs);
  const ymin = Math.min(...ys), ymax = Math.max(...ys);
  const sx = (x) => m + (x - xmin) / (xmax - xmin || 1) * (w - 2 * m);
  const sy = (y) => h - m - (y - ymin) / (ymax - ymin || 1) * (h - 2 * m);
  g.strokeStyle = "#999";
  g.strokeRect(m, m, w - 2 * m, h - 2 * m);
  g.fillStyle = "#444";
  g.font = "11px sans-serif";
  g.fillText(`${ylabel}: ${ymin.toPrecision(3)} .. ${ymax.toPrecision(3)}`, m, m - 8);
  g.fillText(`${xlabel}: ${xmin.toPrecision(3)} .. ${xmax.toPrecision(3)}`, m, h - 10);
  g.strokeStyle = "#1f5fa8";
  g.beginPath();
  xs.forEach((x, i) => (i ? g.lineTo(sx(x), sy(ys[i])) : g.moveTo(sx(x), sy(ys[i]))));
  g.stroke();
}

function drawTf() {
  const tf = timeFrequency(preset(), $("bits").value);
  const t = [], f = [];
  for (let i = 0; i < tf.length; i += 2) {
    t.push(tf[i] * 1e6);
    f.push(tf[i + 1] / 1e6);
  }
  plot($("tf"), t, f, "time (us)", "baseband frequency (MHz)");
}

function drawAmbiguity() {
  const s = ambiguitySurface(preset(), $("amb-shape").value, Number($("amb-n").value), $("amb-numeric").checked);
  const tau = s.tau, fd = s.fd, mag = s.mag;
  const c = $("amb"), g = c.getContext("2d");
  const img = g.createImageData(fd.length, tau.length);
  // Rows are delay (top = most negative), columns Doppler.
  for (let i = 0; i < tau.length; i++) {
    for (let j = 0; j < fd.length; j++) {
      const v = Math.min(1, mag[i * fd.length + j]);
      const k = 4 * (i * fd.length + j);
      img.data[k] = 255 * Math.sqrt(v);
      img.data[k + 1] = 255 * v * v;
      img.data[k + 2] = 255 * (1 - v) * 0.6;
      img.data[k + 3] = 255;
    }
  }
  const tmp = document.createElement("canvas");
  tmp.width = fd.length;
  tmp.height = tau.length;
  tmp.getContext("2d").putImageData(img, 0, 0);
  g.imageSmoothingEnabled = false;
  g.drawImage(tmp, 0, 0, c.width, c.height);
  plot($("cut-delay"), Array.from(tau, (x) => x * 1e6), s.delayCut(), "delay (us)", "|chi| at fd = 0");
  plot($("cut-doppler"), Array.from(fd, (x) => x / 1e3), s.dopplerCut(), "Doppler (kHz)", "|chi| at tau = 0");
  s.free();
}

function runRadar() {
  const r = radarEstimate(
    preset(),
    $("rad-shape").value,
    Number($("rad-r").value),
    Number($("rad-v").value),
    Number($("rad-snr").value),
    BigInt($("rad-seed").value),
  );
  const fmt = (x, d) => (Number.isNaN(x) ? "failed" : x.toFixed(d));
  $("rad-out").textContent = [
    `proposed  range ${fmt(r.range_m, 3)} m   velocity ${fmt(r.velocity_mps, 2)} m/s`,
    `          beats up ${fmt(r.f_up_hz / 1e6, 4)} MHz, down ${fmt(r.f_down_hz / 1e6, 4)} MHz`,
    `fmcw      range ${fmt(r.fmcw_range_m, 3)} m   velocity ${fmt(r.fmcw_velocity_mps, 2)} m/s`,
    r.message,
  ].join("\n");
  r.free();
}

await init();
$("status").textContent = "";
$("tf-run").onclick = () => show("tf", drawTf);
$("amb-run").onclick = () => show("amb", drawAmbiguity);
$("rad-run").onclick = () => show("rad", runRadar);
show("tf", drawTf);
