// Browser entry point: WebSocket wiring, canvas with pan/zoom, chat panel,
// and trial controls. All state lives in the reducer; this file only wires
// DOM events to it.

import { parseFrame } from "./protocol.js";
import { SessionView, applyFrame, conversationActive, initialView } from "./state.js";
import { Viewport, fitViewport, renderScene } from "./render.js";
import { misunderstood, planLabel, startOver, submitChat } from "./chat.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function main(): void {
  const canvas = byId<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d")!;
  const chatLog = byId<HTMLDivElement>("chat-log");
  const chatInput = byId<HTMLInputElement>("chat-input");
  const sendButton = byId<HTMLButtonElement>("chat-send");
  const startOverButton = byId<HTMLButtonElement>("start-over");
  const misunderstoodButton = byId<HTMLButtonElement>("misunderstood");
  const planPanel = byId<HTMLDivElement>("plan-panel");
  const statusPanel = byId<HTMLDivElement>("status");

  let view: SessionView = initialView();
  let viewport: Viewport | null = null;
  let userPanned = false;

  const url = new URLSearchParams(window.location.search).get("ws")
    ?? `ws://${window.location.hostname}:8765`;
  const socket = new WebSocket(url);

  function send(message: object): void {
    if (socket.readyState === WebSocket.OPEN) {
      socket.send(JSON.stringify(message));
    }
  }

  function redraw(): void {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (view.hello && (viewport === null || !userPanned)) {
      viewport = fitViewport(view.hello.bounds, canvas.width, canvas.height);
    }
    if (viewport) {
      renderScene(view, ctx as unknown as never, viewport);
    }
    planPanel.textContent = planLabel(view);
    const gate = conversationActive(view);
    chatInput.disabled = !gate;
    sendButton.disabled = !gate;
    chatInput.title = gate ? "" : "input is enabled during the conversation only";
    statusPanel.textContent =
      `${view.connection} | state: ${view.brainState}` +
      (view.trialOutcome ? ` | trial: ${view.trialOutcome}` : "") +
      (view.lastError ? ` | error: ${view.lastError}` : "");
    chatLog.innerHTML = "";
    for (const entry of view.chat) {
      const div = document.createElement("div");
      div.className = `chat-${entry.speaker}`;
      div.textContent = `${entry.speaker === "robot" ? "Robot" : "You"}: ` +
        entry.text;
      chatLog.appendChild(div);
    }
    chatLog.scrollTop = chatLog.scrollHeight;
  }

  socket.onmessage = (event) => {
    view = applyFrame(view, parseFrame(String(event.data)));
    redraw();
  };
  socket.onclose = () => {
    view = { ...view, connection: "closed" };
    redraw();
  };

  function trySend(): void {
    const decision = submitChat(view, chatInput.value);
    if (decision.accepted && decision.outbound) {
      send(decision.outbound);
      chatInput.value = "";
    }
  }

  sendButton.onclick = trySend;
  chatInput.onkeydown = (event) => {
    if (event.key === "Enter") {
      trySend();
    }
  };
  startOverButton.onclick = () => {
    const decision = startOver(view);
    if (decision.accepted && decision.outbound) {
      send(decision.outbound);
    }
  };
  misunderstoodButton.onclick = () => {
    const decision = misunderstood(view);
    if (decision.accepted && decision.outbound) {
      send(decision.outbound);
    }
  };

  canvas.onwheel = (event) => {
    if (!viewport) {
      return;
    }
    event.preventDefault();
    userPanned = true;
    const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
    viewport = { ...viewport, scale: viewport.scale * factor };
    redraw();
  };
  let dragging: [number, number] | null = null;
  canvas.onmousedown = (event) => {
    dragging = [event.clientX, event.clientY];
  };
  window.onmouseup = () => {
    dragging = null;
  };
  window.onmousemove = (event) => {
    if (dragging && viewport) {
      userPanned = true;
      viewport = {
        ...viewport,
        offsetX: viewport.offsetX + (event.clientX - dragging[0]),
        offsetY: viewport.offsetY - (event.clientY - dragging[1]),
      };
      dragging = [event.clientX, event.clientY];
      redraw();
    }
  };

  redraw();
}

window.addEventListener("DOMContentLoaded", main);
