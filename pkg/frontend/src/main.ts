import { render } from './app';
import './style.css';

const mount = document.querySelector<HTMLElement>('#app');
if (!mount) throw new Error('missing #app mount point');
render(mount);
