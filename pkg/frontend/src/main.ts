import { ApiClient } from "./api.js";
import { AppModel } from "./model.js";
import { bindView } from "./view.js";

const api = new ApiClient("");
let render: () => void = () => {};
const model = new AppModel(api, () => render());

render = bindView(model);
render();

void model.init().then(() => {
  // keep the shown version current; edits from elsewhere raise the banner
  setInterval(() => void model.refreshMeta().catch(() => {}), 2000);
});
