import { Api } from "./api.js";
import { App } from "./app.js";

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const app = new App(root, new Api(""));
  void app.start();
});
